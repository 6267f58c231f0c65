// Benchmark and verification tool for the speculative segmented-sum SpMV
// library. Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 I/O or data error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "specspmv/bench.hpp"
#include "specspmv/generate.hpp"
#include "specspmv/matrix_market.hpp"

namespace {

using namespace specspmv;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct ConfigFlags {
  std::string preset_name;
  std::optional<int> T, W, B, S;
  std::optional<std::string> precision;
  int workers = 1;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--preset", flags.preset_name,
                  "Tuned configuration: intel-sp, amd-sp, amd-dp, nvidia-sp, nvidia-dp "
                  "(default nvidia-dp)");
  cmd->add_option("--T", flags.T, "Lanes per thread-bunch (power of two)");
  cmd->add_option("--W", flags.W, "Lane width in nonzeros");
  cmd->add_option("--B", flags.B, "Bunches per scheduling group");
  cmd->add_option("--S", flags.S, "Tiles per thread-bunch");
  cmd->add_option("--precision", flags.precision, "Scalar precision: sp or dp");
  cmd->add_option("--workers", flags.workers, "Worker threads")->default_val(1);
}

SpmvConfig resolve_config(const ConfigFlags& flags) {
  SpmvConfig cfg = preset(flags.preset_name.empty() ? "nvidia-dp" : flags.preset_name);
  if (flags.T) cfg.T = *flags.T;
  if (flags.W) cfg.W = *flags.W;
  if (flags.B) cfg.B = *flags.B;
  if (flags.S) cfg.S = *flags.S;
  if (flags.precision) {
    if (*flags.precision == "sp") {
      cfg.precision = Precision::sp;
    } else if (*flags.precision == "dp") {
      cfg.precision = Precision::dp;
    } else {
      throw std::invalid_argument("precision must be sp or dp, got '" +
                                  *flags.precision + "'");
    }
  }
  cfg.workers = flags.workers;
  cfg.validate();
  return cfg;
}

std::string comma_free(std::string name) {
  std::replace(name.begin(), name.end(), ',', ';');
  return name;
}

std::string file_stem(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  if (base.size() > 4 && base.substr(base.size() - 4) == ".mtx") {
    base.resize(base.size() - 4);
  }
  return comma_free(base);
}

struct NamedMatrix {
  std::string name;
  CsrMatrix<double> matrix;
};

NamedMatrix load_one(const std::string& path, const std::string& genspec) {
  if (path.empty() == genspec.empty()) {
    throw std::invalid_argument("provide exactly one matrix source: --matrix or --gen");
  }
  NamedMatrix out;
  if (!path.empty()) {
    out.name = file_stem(path);
    out.matrix = coo_to_csr(parse_matrix_market_file(path));
  } else {
    const GenSpec spec = parse_genspec(genspec);
    out.name = comma_free(to_string(spec));
    out.matrix = generate(spec);
  }
  const ValidationReport report = validate_csr(out.matrix);
  if (!report.ok()) {
    throw MatrixMarketError("loaded matrix is not canonical CSR: " + report.violations[0],
                            0);
  }
  return out;
}

void print_record(const BenchRecord& r) {
  std::printf(
      "matrix=%s m=%d n=%d nnz=%lld alg=%s precision=%s T=%d W=%d B=%d S=%d workers=%d "
      "runs=%d min_ms=%.6g avg_ms=%.6g gflops=%.6g gbps=%.6g max_rel_err=%.3g "
      "dirty_tiles=%lld\n",
      r.matrix.c_str(), static_cast<int>(r.m), static_cast<int>(r.n),
      static_cast<long long>(r.nnz), to_string(r.algorithm), to_string(r.precision), r.T,
      r.W, r.B, r.S, r.workers, r.runs, r.min_ms, r.avg_ms, r.gflops, r.gbps,
      r.max_rel_err, static_cast<long long>(r.dirty_tiles));
}

void write_csv_file(const std::string& path, const std::vector<BenchRecord>& records) {
  std::ofstream out(path);
  if (!out) {
    throw MatrixMarketError("cannot open '" + path + "' for writing", 0);
  }
  write_csv(out, records);
  out.flush();
  if (!out) {
    throw MatrixMarketError("failed writing '" + path + "'", 0);
  }
}

template <typename S>
int run_command(const NamedMatrix& nm, Algorithm alg, const SpmvConfig& cfg, int iters,
                bool check, const std::string& csv_path) {
  const CsrMatrix<S> a = convert_precision<S>(nm.matrix);
  const BenchResult<S> result = run_benchmark(a, nm.name, alg, cfg, iters);
  print_record(result.record);
  if (!csv_path.empty()) {
    write_csv_file(csv_path, {result.record});
  }
  if (check && !result.verified) {
    std::fprintf(stderr, "verification FAILED: max_rel_err=%.6g\n",
                 result.record.max_rel_err);
    return kExitVerification;
  }
  return kExitOk;
}

template <typename S>
int sweep_command(const std::vector<NamedMatrix>& matrices, SweepParam param,
                  const std::vector<int>& values, const SpmvConfig& cfg, int iters,
                  bool check, const std::string& csv_path) {
  std::vector<std::pair<std::string, CsrMatrix<S>>> set;
  set.reserve(matrices.size());
  for (const NamedMatrix& nm : matrices) {
    set.emplace_back(nm.name, convert_precision<S>(nm.matrix));
  }
  const SweepResult<S> result = sweep(set, param, values, cfg, iters);
  for (const BenchRecord& r : result.records) {
    print_record(r);
  }
  if (!csv_path.empty()) {
    write_csv_file(csv_path, result.records);
  }
  if (check && !result.all_verified) {
    std::fprintf(stderr, "verification FAILED during sweep\n");
    return kExitVerification;
  }
  return kExitOk;
}

template <typename S>
int verify_command(const NamedMatrix& nm, const std::vector<Algorithm>& algorithms,
                   const SpmvConfig& cfg) {
  const CsrMatrix<S> a = convert_precision<S>(nm.matrix);
  bool all_ok = true;
  for (const Algorithm alg : algorithms) {
    const BenchResult<S> result = run_benchmark(a, nm.name, alg, cfg, 1);
    std::printf("%-8s %s max_rel_err=%.6g\n", to_string(alg),
                result.verified ? "PASS" : "FAIL", result.record.max_rel_err);
    all_ok = all_ok && result.verified;
  }
  return all_ok ? kExitOk : kExitVerification;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Speculative segmented-sum SpMV benchmark"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Benchmark one algorithm on one matrix");
  std::string run_matrix, run_gen, run_alg = "spec", run_csv;
  ConfigFlags run_flags;
  int run_iters = 200;
  bool run_check = false;
  run_cmd->add_option("--matrix", run_matrix, "Matrix Market file");
  run_cmd->add_option("--gen", run_gen, "Generator spec kind:m=..,n=..[,param=..]:seed");
  run_cmd->add_option("--algorithm", run_alg, "spec, rowblock, vector or serial");
  add_config_flags(run_cmd, run_flags);
  run_cmd->add_option("--iters", run_iters, "Timed iterations")->default_val(200);
  run_cmd->add_flag("--check", run_check, "Exit 1 if verification fails");
  run_cmd->add_option("--csv", run_csv, "Write the record as CSV to this file");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep W or S over a matrix set");
  std::vector<std::string> sweep_matrices, sweep_gens;
  std::string sweep_param, sweep_csv;
  std::vector<int> sweep_values;
  ConfigFlags sweep_flags;
  int sweep_iters = 200;
  bool sweep_check = false;
  sweep_cmd->add_option("--matrix", sweep_matrices, "Matrix Market file (repeatable)");
  sweep_cmd->add_option("--gen", sweep_gens, "Generator spec (repeatable)");
  sweep_cmd->add_option("--param", sweep_param, "Parameter to sweep: W or S")->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated parameter values")
      ->required()
      ->delimiter(',');
  add_config_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--iters", sweep_iters, "Timed iterations")->default_val(200);
  sweep_cmd->add_flag("--check", sweep_check, "Exit 1 if any verification fails");
  sweep_cmd->add_option("--csv", sweep_csv, "Write all records as CSV to this file");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a matrix and write it");
  std::string gen_kind, gen_out;
  long long gen_m = 0, gen_n = 0;
  unsigned long long gen_seed = 0;
  std::optional<double> gen_param;
  gen_cmd->add_option("--kind", gen_kind, "dense, uniform, powerlaw or emptyrows")
      ->required();
  gen_cmd->add_option("--m", gen_m, "Rows")->required();
  gen_cmd->add_option("--n", gen_n, "Columns")->required();
  gen_cmd->add_option("--seed", gen_seed, "Generator seed")->default_val(0);
  gen_cmd->add_option("--param", gen_param,
                      "Kind parameter: avg nonzeros per row (uniform), exponent "
                      "(powerlaw), empty fraction (emptyrows)");
  gen_cmd->add_option("--out", gen_out, "Output Matrix Market file")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check algorithms against the serial reference");
  std::string verify_matrix, verify_gen, verify_alg = "spec";
  bool verify_all = false;
  ConfigFlags verify_flags;
  verify_cmd->add_option("--matrix", verify_matrix, "Matrix Market file");
  verify_cmd->add_option("--gen", verify_gen, "Generator spec");
  verify_cmd->add_option("--algorithm", verify_alg, "Algorithm to verify");
  verify_cmd->add_flag("--all-algorithms", verify_all, "Verify spec, rowblock and vector");
  add_config_flags(verify_cmd, verify_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const SpmvConfig cfg = resolve_config(run_flags);
      const NamedMatrix nm = load_one(run_matrix, run_gen);
      const Algorithm alg = algorithm_from_string(run_alg);
      return cfg.precision == Precision::sp
                 ? run_command<float>(nm, alg, cfg, run_iters, run_check, run_csv)
                 : run_command<double>(nm, alg, cfg, run_iters, run_check, run_csv);
    }
    if (sweep_cmd->parsed()) {
      const SpmvConfig cfg = resolve_config(sweep_flags);
      SweepParam param;
      if (sweep_param == "W") {
        param = SweepParam::W;
      } else if (sweep_param == "S") {
        param = SweepParam::S;
      } else {
        throw std::invalid_argument("--param must be W or S, got '" + sweep_param + "'");
      }
      std::vector<NamedMatrix> matrices;
      for (const std::string& path : sweep_matrices) {
        matrices.push_back(load_one(path, ""));
      }
      for (const std::string& g : sweep_gens) {
        matrices.push_back(load_one("", g));
      }
      if (matrices.empty()) {
        throw std::invalid_argument("sweep needs at least one --matrix or --gen");
      }
      return cfg.precision == Precision::sp
                 ? sweep_command<float>(matrices, param, sweep_values, cfg, sweep_iters,
                                        sweep_check, sweep_csv)
                 : sweep_command<double>(matrices, param, sweep_values, cfg, sweep_iters,
                                         sweep_check, sweep_csv);
    }
    if (gen_cmd->parsed()) {
      GenSpec spec;
      spec.kind = gen_kind_from_string(gen_kind);
      spec.num_rows = static_cast<index_t>(gen_m);
      spec.num_cols = static_cast<index_t>(gen_n);
      spec.seed = gen_seed;
      if (gen_param) {
        spec.param = *gen_param;
      } else {
        switch (spec.kind) {
          case GenKind::dense: spec.param = 0.0; break;
          case GenKind::uniform: spec.param = 8.0; break;
          case GenKind::powerlaw: spec.param = 2.0; break;
          case GenKind::emptyrows: spec.param = 0.1; break;
        }
      }
      const CsrMatrix<double> a = generate(spec);
      write_matrix_market_file(gen_out, a);
      std::printf("wrote %s: m=%d n=%d nnz=%d\n", gen_out.c_str(),
                  static_cast<int>(a.num_rows), static_cast<int>(a.num_cols),
                  static_cast<int>(a.nnz()));
      return kExitOk;
    }
    // verify
    const SpmvConfig cfg = resolve_config(verify_flags);
    const NamedMatrix nm = load_one(verify_matrix, verify_gen);
    std::vector<Algorithm> algorithms;
    if (verify_all) {
      algorithms = {Algorithm::spec, Algorithm::rowblock, Algorithm::vector};
    } else {
      algorithms = {algorithm_from_string(verify_alg)};
    }
    return cfg.precision == Precision::sp ? verify_command<float>(nm, algorithms, cfg)
                                          : verify_command<double>(nm, algorithms, cfg);
  } catch (const MatrixMarketError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
