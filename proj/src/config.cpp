#include "specspmv/config.hpp"

#include <stdexcept>

namespace specspmv {

void SpmvConfig::validate() const {
  if (T < 1 || (T & (T - 1)) != 0) {
    throw std::invalid_argument("T must be a power of two, got " + std::to_string(T));
  }
  if (W < 1) throw std::invalid_argument("W must be >= 1, got " + std::to_string(W));
  if (B < 1) throw std::invalid_argument("B must be >= 1, got " + std::to_string(B));
  if (S < 1) throw std::invalid_argument("S must be >= 1, got " + std::to_string(S));
  if (workers < 1) {
    throw std::invalid_argument("workers must be >= 1, got " + std::to_string(workers));
  }
}

Plan make_plan(std::int64_t nnz, const SpmvConfig& cfg) {
  cfg.validate();
  if (nnz < 0) throw std::invalid_argument("nnz must be non-negative");
  Plan p;
  p.tile_size = static_cast<std::int64_t>(cfg.W) * cfg.T;
  const auto ceil_div = [](std::int64_t a, std::int64_t b) { return (a + b - 1) / b; };
  p.num_tiles = ceil_div(nnz, p.tile_size);
  p.num_bunches = ceil_div(nnz, cfg.S * p.tile_size);
  p.num_groups = ceil_div(nnz, static_cast<std::int64_t>(cfg.B) * cfg.S * p.tile_size);
  return p;
}

SpmvConfig preset(const std::string& name) {
  SpmvConfig cfg;
  if (name == "intel-sp") {
    cfg.T = 8;
    cfg.W = 16;
    cfg.B = 4;
    cfg.S = 6;
    cfg.precision = Precision::sp;
  } else if (name == "amd-sp") {
    cfg.T = 64;
    cfg.W = 16;
    cfg.B = 2;
    cfg.S = 2;
    cfg.precision = Precision::sp;
  } else if (name == "amd-dp") {
    cfg.T = 64;
    cfg.W = 8;
    cfg.B = 2;
    cfg.S = 5;
    cfg.precision = Precision::dp;
  } else if (name == "nvidia-sp") {
    cfg.T = 32;
    cfg.W = 8;
    cfg.B = 5;
    cfg.S = 7;
    cfg.precision = Precision::sp;
  } else if (name == "nvidia-dp") {
    cfg.T = 32;
    cfg.W = 4;
    cfg.B = 5;
    cfg.S = 7;
    cfg.precision = Precision::dp;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return cfg;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"intel-sp", "amd-sp", "amd-dp",
                                                 "nvidia-sp", "nvidia-dp"};
  return names;
}

}  // namespace specspmv
