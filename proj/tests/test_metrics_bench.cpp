#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <sstream>

#include "oracle.hpp"
#include "specspmv/baselines.hpp"
#include "specspmv/bench.hpp"
#include "specspmv/metrics.hpp"

using namespace specspmv;
using namespace testutil;

TEST_CASE("throughput and bandwidth formulas are exact on pinned inputs") {
  // 2 * 4e6 flops in 1e-3 s = 8 GFlop/s, exactly representable.
  CHECK(throughput_gflops(4'000'000, 1e-3) == 8.0);
  CHECK(throughput_gflops(0, 1.0) == 0.0);

  // m=6, nnz=12, int32 indices, float64 values:
  // bytes = (6+1+12)*4 + (2*12+6)*8 = 76 + 240 = 316.
  CHECK(bandwidth_gbs(6, 12, 4, 8, 1.0) == 316.0 / 1073741824.0);

  // Doubling the runtime halves both rates exactly (power-of-two scaling).
  CHECK(throughput_gflops(4'000'000, 2e-3) == 4.0);
  CHECK(bandwidth_gbs(6, 12, 4, 8, 2.0) == 158.0 / 1073741824.0);

  CHECK_THROWS_AS(throughput_gflops(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(throughput_gflops(1, -1.0), std::domain_error);
  CHECK_THROWS_AS(throughput_gflops(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bandwidth_gbs(1, 1, 4, 8, 0.0), std::domain_error);
}

TEST_CASE("harmonic mean pinned values") {
  CHECK(harmonic_mean({2.0, 2.0}) == 2.0);
  CHECK(harmonic_mean({}) == 0.0);
  CHECK(harmonic_mean({1.0, 0.0}) == 0.0);
  CHECK(harmonic_mean({4.0}) == 4.0);
  // hmean(1, 3) = 2 / (1 + 1/3) = 1.5
  CHECK(harmonic_mean({1.0, 3.0}) == doctest::Approx(1.5).epsilon(1e-15));
}

namespace {

BenchRecord sample_record(TestRng& rng) {
  BenchRecord r;
  r.matrix = "gen-uniform-" + std::to_string(rng.range(0, 999));
  r.m = static_cast<index_t>(rng.range(1, 1 << 20));
  r.n = static_cast<index_t>(rng.range(1, 1 << 20));
  r.nnz = rng.range(1, 1 << 24);
  r.algorithm = static_cast<Algorithm>(rng.range(0, 3));
  r.precision = rng.range(0, 1) ? Precision::sp : Precision::dp;
  r.T = 1 << rng.range(0, 6);
  r.W = static_cast<int>(rng.range(1, 64));
  r.B = static_cast<int>(rng.range(1, 8));
  r.S = static_cast<int>(rng.range(1, 8));
  r.workers = static_cast<int>(rng.range(1, 64));
  r.runs = static_cast<int>(rng.range(1, 500));
  r.min_ms = rng.uniform() * 10 + 1e-5;
  r.avg_ms = r.min_ms * (1.0 + rng.uniform());
  r.gflops = throughput_gflops(r.nnz, r.avg_ms * 1e-3);
  r.gbps = bandwidth_gbs(r.m, r.nnz, 4,
                         r.precision == Precision::sp ? 4 : 8, r.avg_ms * 1e-3);
  r.max_rel_err = rng.uniform() * 1e-12;
  r.dirty_tiles = rng.range(0, 1000);
  return r;
}

}  // namespace

TEST_CASE("benchmark records survive a CSV round trip bit-for-bit") {
  TestRng rng(29);
  std::vector<BenchRecord> records;
  for (int i = 0; i < 50; ++i) records.push_back(sample_record(rng));

  std::ostringstream out;
  write_csv(out, records);
  std::istringstream in(out.str());
  const std::vector<BenchRecord> parsed = parse_csv(in);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i] == records[i]);
    // Metric reproducibility: rates recompute bit-exactly from stored avg_ms.
    CHECK(parsed[i].gflops == throughput_gflops(parsed[i].nnz, parsed[i].avg_ms * 1e-3));
  }
}

TEST_CASE("CSV parsing rejects malformed input") {
  {
    std::istringstream in("not,a,header\n");
    CHECK_THROWS_AS(parse_csv(in), std::runtime_error);
  }
  {
    std::istringstream in(csv_header() + "\nonly,three,fields\n");
    CHECK_THROWS_AS(parse_csv(in), std::runtime_error);
  }
  {
    // Non-numeric field where a number is required.
    std::istringstream in(csv_header() +
                          "\nname,1,1,zebra,spec,dp,2,2,1,1,1,1,0.5,0.5,1,1,0,0\n");
    CHECK_THROWS_AS(parse_csv(in), std::runtime_error);
  }
  {
    BenchRecord r;
    r.matrix = "has,comma";
    CHECK_THROWS_AS(to_csv_line(r), std::invalid_argument);
  }
}

TEST_CASE("algorithm names round-trip") {
  for (const Algorithm a :
       {Algorithm::spec, Algorithm::rowblock, Algorithm::vector, Algorithm::serial}) {
    CHECK(algorithm_from_string(to_string(a)) == a);
  }
  CHECK_THROWS_AS(algorithm_from_string("fancy"), std::invalid_argument);
}

TEST_CASE("run_benchmark verifies results and fills every field") {
  const CsrMatrix<double> a = fixture_a();
  SpmvConfig cfg = preset("nvidia-dp");
  cfg.workers = 2;
  const BenchResult<double> res =
      run_benchmark<double>(a, "fixture-a", Algorithm::spec, cfg, 3);
  CHECK(res.verified);
  CHECK(res.record.matrix == "fixture-a");
  CHECK(res.record.m == 6);
  CHECK(res.record.n == 6);
  CHECK(res.record.nnz == 12);
  CHECK(res.record.algorithm == Algorithm::spec);
  CHECK(res.record.precision == Precision::dp);
  CHECK(res.record.runs == 3);
  CHECK(res.record.min_ms > 0.0);
  CHECK(res.record.avg_ms >= res.record.min_ms);
  CHECK(res.record.max_rel_err <= 1e-12);
  CHECK(res.record.gflops == throughput_gflops(12, res.record.avg_ms * 1e-3));
  CHECK(res.record.gbps ==
        bandwidth_gbs(6, 12, sizeof(index_t), sizeof(double), res.record.avg_ms * 1e-3));
  // The benchmark multiplies against its own deterministic input vector.
  const DenseVector<double> x = bench_vector<double>(6);
  const DenseVector<double> want = spmv_sequential(a, std::span<const double>(x));
  REQUIRE(res.y.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(within_tolerance(res.y[i], want[i]));
  }
}

TEST_CASE("run_benchmark reports repaired tile counts for the tiled algorithm") {
  const CsrMatrix<double> b = fixture_b();
  SpmvConfig cfg;
  cfg.T = 4;
  cfg.W = 6;
  cfg.S = 2;
  cfg.B = 1;
  cfg.workers = 1;
  const BenchResult<double> res =
      run_benchmark<double>(b, "fixture-b", Algorithm::spec, cfg, 2);
  CHECK(res.verified);
  CHECK(res.record.dirty_tiles == 1);

  const BenchResult<double> serial =
      run_benchmark<double>(b, "fixture-b", Algorithm::serial, cfg, 2);
  CHECK(serial.verified);
  CHECK(serial.record.dirty_tiles == 0);
  CHECK(serial.record.max_rel_err == 0.0);
}

TEST_CASE("run_benchmark covers every algorithm in single precision") {
  const CsrMatrix<float> a = convert_precision<float>(fixture_a());
  SpmvConfig cfg;
  cfg.T = 4;
  cfg.W = 3;
  cfg.S = 1;
  cfg.precision = Precision::sp;
  for (const Algorithm alg :
       {Algorithm::spec, Algorithm::rowblock, Algorithm::vector, Algorithm::serial}) {
    const BenchResult<float> res = run_benchmark<float>(a, "fixture-a", alg, cfg, 2);
    CAPTURE(to_string(alg));
    CHECK(res.verified);
    CHECK(res.record.precision == Precision::sp);
  }
}

TEST_CASE("sweep produces one verified record per value") {
  std::vector<std::pair<std::string, CsrMatrix<double>>> matrices;
  matrices.emplace_back("fixture-b", fixture_b());
  SpmvConfig cfg;
  cfg.T = 4;
  cfg.S = 2;
  const SweepResult<double> sw =
      sweep<double>(matrices, SweepParam::W, {2, 4, 8, 16}, cfg, 2);
  CHECK(sw.all_verified);
  REQUIRE(sw.records.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(sw.records[i].W == std::vector<int>{2, 4, 8, 16}[i]);
    CHECK(sw.records[i].matrix == "fixture-b");
  }
}

TEST_CASE("multi-matrix sweeps append a harmonic-mean summary row per value") {
  std::vector<std::pair<std::string, CsrMatrix<double>>> matrices;
  matrices.emplace_back("fixture-a", fixture_a());
  matrices.emplace_back("fixture-b", fixture_b());
  SpmvConfig cfg;
  cfg.T = 4;
  cfg.W = 2;
  const SweepResult<double> sw = sweep<double>(matrices, SweepParam::S, {1, 2}, cfg, 2);
  CHECK(sw.all_verified);
  // Per value: two matrix rows plus one summary row.
  REQUIRE(sw.records.size() == 6);
  for (const std::size_t summary_at : {std::size_t{2}, std::size_t{5}}) {
    const BenchRecord& s = sw.records[summary_at];
    CHECK(s.matrix == "harmonic-mean(2)");
    CHECK(s.nnz == 0);
    const double hm =
        harmonic_mean({sw.records[summary_at - 2].gflops, sw.records[summary_at - 1].gflops});
    CHECK(s.gflops == hm);
    CHECK(s.dirty_tiles ==
          sw.records[summary_at - 2].dirty_tiles + sw.records[summary_at - 1].dirty_tiles);
  }
  CHECK(sw.records[0].S == 1);
  CHECK(sw.records[3].S == 2);
}

TEST_CASE("sweep validates parameter values") {
  std::vector<std::pair<std::string, CsrMatrix<double>>> matrices;
  matrices.emplace_back("fixture-a", fixture_a());
  SpmvConfig cfg;
  CHECK_THROWS_AS(sweep<double>(matrices, SweepParam::W, {0}, cfg, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep<double>(matrices, SweepParam::W, {}, cfg, 1),
                  std::invalid_argument);
}

TEST_CASE("bench vectors are deterministic in the seed") {
  const DenseVector<double> a = bench_vector<double>(100, 42);
  const DenseVector<double> b = bench_vector<double>(100, 42);
  const DenseVector<double> c = bench_vector<double>(100, 43);
  CHECK(a == b);
  CHECK(a != c);
  REQUIRE(a.size() == 100);
}
