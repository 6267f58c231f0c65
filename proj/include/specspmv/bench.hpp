#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <omp.h>

#include "specspmv/baselines.hpp"
#include "specspmv/config.hpp"
#include "specspmv/csr.hpp"
#include "specspmv/engine.hpp"
#include "specspmv/metrics.hpp"
#include "specspmv/types.hpp"

namespace specspmv {

enum class Algorithm { spec, rowblock, vector, serial };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct BenchRecord {
  std::string matrix;
  index_t m = 0;
  index_t n = 0;
  std::int64_t nnz = 0;
  Algorithm algorithm = Algorithm::spec;
  Precision precision = Precision::dp;
  int T = 0;
  int W = 0;
  int B = 0;
  int S = 0;
  int workers = 0;
  int runs = 0;
  double min_ms = 0.0;
  double avg_ms = 0.0;
  double gflops = 0.0;
  double gbps = 0.0;
  double max_rel_err = 0.0;
  std::int64_t dirty_tiles = 0;

  bool operator==(const BenchRecord&) const = default;
};

// CSV schema, in column order. Reals serialize as %.17g so that
// parse(emit(records)) == records exactly.
std::string csv_header();
std::string to_csv_line(const BenchRecord& r);
BenchRecord parse_csv_line(const std::string& line);
void write_csv(std::ostream& out, std::span<const BenchRecord> records);
std::vector<BenchRecord> parse_csv(std::istream& in);

// n / sum(1/x_i); 0 for empty input or any non-positive element.
double harmonic_mean(std::span<const double> values);
inline double harmonic_mean(std::initializer_list<double> values) {
  return harmonic_mean(std::span<const double>(values.begin(), values.size()));
}

namespace detail {
void benchmark_sink(double v);
}

template <typename S>
struct BenchResult {
  BenchRecord record;
  bool verified = true;
  DenseVector<S> y;  // warm-up output, for callers that inspect it
};

// Deterministic right-hand side for benchmarking and verification.
template <typename S>
DenseVector<S> bench_vector(index_t n, std::uint64_t seed = 0x5eedu) {
  std::mt19937_64 rng(seed);
  DenseVector<S> x(static_cast<std::size_t>(n));
  for (auto& v : x) {
    v = static_cast<S>(static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }
  return x;
}

// Times `iters` runs after one untimed warm-up. The warm-up output is checked
// elementwise against spmv_sequential at the precision's tolerance; the
// largest relative deviation lands in the record either way, and `verified`
// reports whether every element passed.
template <typename S>
BenchResult<S> run_benchmark(const CsrMatrix<S>& a, const std::string& matrix_name,
                             Algorithm alg, const SpmvConfig& cfg, int iters = 200) {
  if (iters < 1) {
    throw std::invalid_argument("run_benchmark: iters must be >= 1");
  }
  cfg.validate();
  omp_set_num_threads(cfg.workers);
  const DenseVector<S> x = bench_vector<S>(a.num_cols);
  const std::span<const S> xs(x);

  auto run_once = [&]() -> DenseVector<S> {
    switch (alg) {
      case Algorithm::spec: return spmv(a, xs, cfg);
      case Algorithm::rowblock: return spmv_row_parallel(a, xs, cfg.workers);
      case Algorithm::vector: return spmv_vector_emulated(a, xs, cfg.T);
      case Algorithm::serial: return spmv_sequential(a, xs);
    }
    throw std::logic_error("run_benchmark: unknown algorithm");
  };

  BenchResult<S> result;
  BenchRecord& rec = result.record;
  rec.matrix = matrix_name;
  rec.m = a.num_rows;
  rec.n = a.num_cols;
  rec.nnz = a.nnz();
  rec.algorithm = alg;
  rec.precision = sizeof(S) == 4 ? Precision::sp : Precision::dp;
  rec.T = cfg.T;
  rec.W = cfg.W;
  rec.B = cfg.B;
  rec.S = cfg.S;
  rec.workers = cfg.workers;
  rec.runs = iters;

  result.y = run_once();
  const DenseVector<S> reference = spmv_sequential(a, xs);
  rec.max_rel_err = max_relative_error(result.y, reference);
  const auto tol = default_tolerance<S>();
  const std::vector<double> scales = row_term_scales(a, xs);
  result.verified = true;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (!within_tolerance_scaled(result.y[i], reference[i], scales[i], tol)) {
      result.verified = false;
      break;
    }
  }
  if (alg == Algorithm::spec) {
    SpmvStats stats;
    DenseVector<S> y2 = spmv(a, xs, cfg, &stats);
    rec.dirty_tiles = stats.dirty_tiles;
    if (!y2.empty()) detail::benchmark_sink(static_cast<double>(y2[0]));
  }

  using clock = std::chrono::steady_clock;
  double min_ms = 0.0;
  double total_ms = 0.0;
  for (int it = 0; it < iters; ++it) {
    const auto t0 = clock::now();
    DenseVector<S> y = run_once();
    const auto t1 = clock::now();
    if (!y.empty()) detail::benchmark_sink(static_cast<double>(y[0]));
    // Floor of one clock tick keeps degenerate inputs from reporting zero.
    const double ms = std::max(
        std::chrono::duration<double, std::milli>(t1 - t0).count(), 1e-6);
    total_ms += ms;
    min_ms = it == 0 ? ms : std::min(min_ms, ms);
  }
  rec.min_ms = min_ms;
  rec.avg_ms = total_ms / iters;

  // Metrics derive from the stored avg_ms so a CSV round trip reproduces
  // them bit-exactly.
  const double runtime_s = rec.avg_ms * 1e-3;
  rec.gflops = throughput_gflops(rec.nnz, runtime_s);
  rec.gbps = bandwidth_gbs(rec.m, rec.nnz, static_cast<int>(sizeof(index_t)),
                           static_cast<int>(sizeof(S)), runtime_s);
  return result;
}

enum class SweepParam { W, S };

template <typename S>
struct SweepResult {
  std::vector<BenchRecord> records;
  bool all_verified = true;
};

// Benchmarks the speculative algorithm for each parameter value over each
// matrix. With more than one matrix, each value additionally gets a summary
// row: harmonic-mean gflops/gbps, arithmetic-mean times, max of max_rel_err,
// summed dirty tiles, zero dimensions.
template <typename S>
SweepResult<S> sweep(const std::vector<std::pair<std::string, CsrMatrix<S>>>& matrices,
                     SweepParam param, const std::vector<int>& values, SpmvConfig cfg,
                     int iters = 200) {
  if (values.empty()) {
    throw std::invalid_argument("sweep: need at least one parameter value");
  }
  SweepResult<S> result;
  for (const int v : values) {
    if (param == SweepParam::W) {
      cfg.W = v;
    } else {
      cfg.S = v;
    }
    cfg.validate();
    const std::size_t first = result.records.size();
    for (const auto& [name, matrix] : matrices) {
      BenchResult<S> r = run_benchmark(matrix, name, Algorithm::spec, cfg, iters);
      result.all_verified = result.all_verified && r.verified;
      result.records.push_back(std::move(r.record));
    }
    const std::size_t count = result.records.size() - first;
    if (matrices.size() > 1) {
      BenchRecord summary = result.records[first];
      summary.matrix = "harmonic-mean(" + std::to_string(count) + ")";
      summary.m = 0;
      summary.n = 0;
      summary.nnz = 0;
      std::vector<double> gflops, gbps;
      double min_sum = 0.0, avg_sum = 0.0, err = 0.0;
      std::int64_t dirty = 0;
      for (std::size_t i = first; i < first + count; ++i) {
        const BenchRecord& r = result.records[i];
        gflops.push_back(r.gflops);
        gbps.push_back(r.gbps);
        min_sum += r.min_ms;
        avg_sum += r.avg_ms;
        err = std::max(err, r.max_rel_err);
        dirty += r.dirty_tiles;
      }
      summary.gflops = harmonic_mean(gflops);
      summary.gbps = harmonic_mean(gbps);
      summary.min_ms = min_sum / static_cast<double>(count);
      summary.avg_ms = avg_sum / static_cast<double>(count);
      summary.max_rel_err = err;
      summary.dirty_tiles = dirty;
      result.records.push_back(std::move(summary));
    }
  }
  return result;
}

}  // namespace specspmv
