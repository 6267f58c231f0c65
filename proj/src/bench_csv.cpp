#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "specspmv/bench.hpp"

namespace specspmv {
namespace {

constexpr const char* kHeader =
    "matrix,m,n,nnz,algorithm,precision,T,W,B,S,workers,runs,"
    "min_ms,avg_ms,gflops,gbps,max_rel_err,dirty_tiles";

std::string real_field(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) {
    throw std::runtime_error("malformed real field '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty()) {
    throw std::runtime_error("malformed integer field '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::spec: return "spec";
    case Algorithm::rowblock: return "rowblock";
    case Algorithm::vector: return "vector";
    case Algorithm::serial: return "serial";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "spec") return Algorithm::spec;
  if (name == "rowblock") return Algorithm::rowblock;
  if (name == "vector") return Algorithm::vector;
  if (name == "serial") return Algorithm::serial;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string csv_header() { return kHeader; }

std::string to_csv_line(const BenchRecord& r) {
  if (r.matrix.find(',') != std::string::npos) {
    throw std::invalid_argument("matrix name '" + r.matrix + "' contains a comma");
  }
  std::ostringstream out;
  out << r.matrix << ',' << r.m << ',' << r.n << ',' << r.nnz << ','
      << to_string(r.algorithm) << ',' << to_string(r.precision) << ',' << r.T << ','
      << r.W << ',' << r.B << ',' << r.S << ',' << r.workers << ',' << r.runs << ','
      << real_field(r.min_ms) << ',' << real_field(r.avg_ms) << ','
      << real_field(r.gflops) << ',' << real_field(r.gbps) << ','
      << real_field(r.max_rel_err) << ',' << r.dirty_tiles;
  return out.str();
}

BenchRecord parse_csv_line(const std::string& line) {
  const auto fields = split_fields(line);
  if (fields.size() != 18) {
    throw std::runtime_error("expected 18 CSV fields, got " +
                                std::to_string(fields.size()));
  }
  BenchRecord r;
  r.matrix = fields[0];
  r.m = static_cast<index_t>(parse_int(fields[1]));
  r.n = static_cast<index_t>(parse_int(fields[2]));
  r.nnz = parse_int(fields[3]);
  r.algorithm = algorithm_from_string(fields[4]);
  if (fields[5] == "sp") {
    r.precision = Precision::sp;
  } else if (fields[5] == "dp") {
    r.precision = Precision::dp;
  } else {
    throw std::runtime_error("unknown precision '" + fields[5] + "'");
  }
  r.T = static_cast<int>(parse_int(fields[6]));
  r.W = static_cast<int>(parse_int(fields[7]));
  r.B = static_cast<int>(parse_int(fields[8]));
  r.S = static_cast<int>(parse_int(fields[9]));
  r.workers = static_cast<int>(parse_int(fields[10]));
  r.runs = static_cast<int>(parse_int(fields[11]));
  r.min_ms = parse_real(fields[12]);
  r.avg_ms = parse_real(fields[13]);
  r.gflops = parse_real(fields[14]);
  r.gbps = parse_real(fields[15]);
  r.max_rel_err = parse_real(fields[16]);
  r.dirty_tiles = parse_int(fields[17]);
  return r;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kHeader << '\n';
  for (const BenchRecord& r : records) {
    out << to_csv_line(r) << '\n';
  }
}

std::vector<BenchRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("missing or unexpected CSV header");
  }
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(parse_csv_line(line));
  }
  return records;
}

double harmonic_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double denom = 0.0;
  for (const double v : values) {
    if (!(v > 0.0)) return 0.0;
    denom += 1.0 / v;
  }
  return static_cast<double>(values.size()) / denom;
}

namespace detail {

namespace {
volatile double sink_cell = 0.0;
}

void benchmark_sink(double v) { sink_cell = sink_cell + v; }

}  // namespace detail

}  // namespace specspmv
