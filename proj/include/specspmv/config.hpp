#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specspmv/types.hpp"

namespace specspmv {

// Virtual SIMD shape. T lanes per thread-bunch, each lane W slots wide, so a
// tile covers W*T nonzeros; a bunch runs S tiles; B bunches form a scheduling
// group (batch size only, never a correctness boundary).
struct SpmvConfig {
  int T = 32;
  int W = 4;
  int B = 5;
  int S = 7;
  int workers = 1;
  Precision precision = Precision::dp;

  // Throws std::invalid_argument unless T is a power of two and T, W, B, S,
  // workers are all >= 1.
  void validate() const;
};

struct Plan {
  std::int64_t tile_size = 0;    // W*T
  std::int64_t num_tiles = 0;    // ceil(nnz / (W*T))
  std::int64_t num_bunches = 0;  // ceil(nnz / (S*W*T))
  std::int64_t num_groups = 0;   // ceil(nnz / (B*S*W*T))
};

Plan make_plan(std::int64_t nnz, const SpmvConfig& cfg);

// Tuned configurations, keyed by the device family they were sized for.
// Names: intel-sp, amd-sp, amd-dp, nvidia-sp, nvidia-dp.
SpmvConfig preset(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace specspmv
