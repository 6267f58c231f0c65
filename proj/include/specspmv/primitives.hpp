#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "specspmv/types.hpp"

namespace specspmv {

namespace detail {

inline index_t search_rightmost_impl(std::span<const index_t> sorted, std::int64_t key,
                                     std::int64_t* probes) {
  if (sorted.empty()) {
    throw std::invalid_argument("binary_search_rightmost: empty array");
  }
  if (static_cast<std::int64_t>(sorted.front()) > key) {
    throw std::invalid_argument("binary_search_rightmost: key below first element");
  }
  // Invariant: sorted[lo] <= key, sorted[i] > key for all i > hi.
  std::size_t lo = 0;
  std::size_t hi = sorted.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (probes) ++*probes;
    if (static_cast<std::int64_t>(sorted[mid]) <= key) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return static_cast<index_t>(lo);
}

}  // namespace detail

// Largest i with sorted[i] <= key. Requires sorted[0] <= key.
inline index_t binary_search_rightmost(std::span<const index_t> sorted, std::int64_t key) {
  return detail::search_rightmost_impl(sorted, key, nullptr);
}

// Same search, accumulating the number of probe comparisons into `probes`.
inline index_t binary_search_rightmost_counted(std::span<const index_t> sorted,
                                               std::int64_t key, std::int64_t& probes) {
  return detail::search_rightmost_impl(sorted, key, &probes);
}

// out[0] = 0, out[i] = out[i-1] + in[i-1]. Empty input yields empty output.
inline void exclusive_scan(std::span<const index_t> in, std::span<index_t> out) {
  if (out.size() != in.size()) {
    throw std::invalid_argument("exclusive_scan: output size mismatch");
  }
  index_t acc = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const index_t v = in[i];
    out[i] = acc;
    acc += v;
  }
}

inline std::vector<index_t> exclusive_scan(std::span<const index_t> in) {
  std::vector<index_t> out(in.size());
  exclusive_scan(in, out);
  return out;
}

// Per-tile segment head flags, one byte per nonzero slot. flags[0] is TRUE on
// entry to the reduction regardless of whether a row starts there; whether the
// first slot continues a row from the previous tile travels separately.
using SegmentDescriptor = std::span<const std::uint8_t>;

// Compact per-lane partial sums left behind by segmented_reduction_tile.
// Lane j owns workspace slots [j*W, (j+1)*W); its tc[j] segment totals sit at
// workspace[j*W + ts[j]] onwards. ts is always 0 here, but consumers must
// honor it rather than assume it.
template <typename S>
struct CompactSums {
  std::span<S> workspace;
  std::span<const index_t> ts;
  std::span<const index_t> tc;
};

// Folds each flagged segment of `workspace` (length W*T, lane-major) into the
// owning lane's next compact slot, in place. Canonical summation order is one
// serial left-to-right pass, so the totals are bit-identical to a serial
// per-segment fold. A segment is owned by the lane holding its head; its sum
// includes any spill into later lanes. Requires flags[0] set.
template <typename S>
void segmented_reduction_tile(std::span<S> workspace, SegmentDescriptor flags,
                              index_t lane_width, std::span<index_t> ts,
                              std::span<index_t> tc) {
  if (workspace.empty()) {
    throw std::invalid_argument("segmented_reduction_tile: empty workspace");
  }
  if (flags.size() != workspace.size() || lane_width <= 0 ||
      workspace.size() % static_cast<std::size_t>(lane_width) != 0 ||
      ts.size() != workspace.size() / static_cast<std::size_t>(lane_width) ||
      tc.size() != ts.size()) {
    throw std::invalid_argument("segmented_reduction_tile: inconsistent extents");
  }
  if (!flags[0]) {
    throw std::invalid_argument("segmented_reduction_tile: flags[0] must be set");
  }
  for (std::size_t j = 0; j < tc.size(); ++j) {
    ts[j] = 0;
    tc[j] = 0;
  }
  const auto w = static_cast<std::size_t>(lane_width);
  std::size_t head_lane = 0;
  S acc = workspace[0];
  for (std::size_t p = 1; p < workspace.size(); ++p) {
    const S v = workspace[p];
    if (flags[p]) {
      // Close the open segment. Its compact slot never lies beyond the
      // segment head, so in-place writes stay behind the read cursor.
      workspace[head_lane * w + static_cast<std::size_t>(tc[head_lane])] = acc;
      ++tc[head_lane];
      head_lane = p / w;
      acc = v;
    } else {
      acc += v;
    }
  }
  workspace[head_lane * w + static_cast<std::size_t>(tc[head_lane])] = acc;
  ++tc[head_lane];
}

}  // namespace specspmv
