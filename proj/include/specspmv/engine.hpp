#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "specspmv/config.hpp"
#include "specspmv/csr.hpp"
#include "specspmv/primitives.hpp"
#include "specspmv/types.hpp"

namespace specspmv {

// One per bunch. A row spanning a bunch boundary must not be written directly
// by the bunch that only sees its head elsewhere, so the bunch's first row sum
// is parked here and folded in serially after the parallel stage.
template <typename S>
struct SynchronizerEntry {
  index_t idx = 0;
  S val = S{};
};

// One per dirty tile (a tile whose row range contains an empty row). The tile
// is re-examined after the parallel stage; start/stop are kept alongside the
// tile id so repair needs no repositioning.
struct SpeculatorEntry {
  std::int64_t tile_id = 0;
  index_t start = 0;
  index_t stop = 0;
};

template <typename S>
struct SideArrays {
  std::vector<SynchronizerEntry<S>> synchronizer;  // length: number of bunches
  std::vector<SpeculatorEntry> speculator;         // capacity: number of tiles
  std::int64_t dirty_count = 0;
};

// Per-worker scratch, reused across every bunch the worker executes.
template <typename S>
struct BunchState {
  std::vector<index_t> tile_offset;      // S+1 row offsets for the bunch
  S transmitter = S{};                   // partial sum carried between tiles
  std::vector<std::uint8_t> flags;       // W*T segment heads
  std::vector<S> workspace;              // W*T products, reduced in place
  std::vector<index_t> ts;               // T compact-sum starts (always 0)
  std::vector<index_t> tc;               // T compact-sum counts
  std::vector<index_t> y_index;          // T exclusive-scanned segment ranks

  explicit BunchState(const SpmvConfig& cfg)
      : tile_offset(static_cast<std::size_t>(cfg.S) + 1),
        flags(static_cast<std::size_t>(cfg.W) * cfg.T),
        workspace(static_cast<std::size_t>(cfg.W) * cfg.T),
        ts(static_cast<std::size_t>(cfg.T)),
        tc(static_cast<std::size_t>(cfg.T)),
        y_index(static_cast<std::size_t>(cfg.T)) {}
};

template <typename S>
struct StageResult {
  DenseVector<S> y;
  SideArrays<S> side;
};

struct SpmvStats {
  Plan plan;
  std::int64_t dirty_tiles = 0;
};

// Rightmost-search row offsets for the S+1 tile boundaries of a bunch.
// Boundaries at or past nnz resolve to num_rows.
inline void position_tiles(std::span<const index_t> row_ptr, std::int64_t bunch_id,
                           const SpmvConfig& cfg, std::span<index_t> tile_offset) {
  const std::int64_t tile_size = static_cast<std::int64_t>(cfg.W) * cfg.T;
  const std::int64_t base = bunch_id * cfg.S * tile_size;
  for (int i = 0; i <= cfg.S; ++i) {
    tile_offset[i] = binary_search_rightmost(row_ptr, base + i * tile_size);
  }
}

struct DescriptorInfo {
  bool dirty = false;         // some row in [start, stop) is empty
  bool continuation = false;  // slot 0 continues the previous tile's row
};

// Scatters segment-head flags for rows beginning strictly inside the tile.
// flags[0] is forced TRUE: either a row starts exactly at the boundary or the
// slot continues the previous tile's row, which `continuation` records.
inline DescriptorInfo build_descriptor(std::span<const index_t> row_ptr, index_t start,
                                       index_t stop, std::int64_t boundary,
                                       std::int64_t tile_size,
                                       std::span<std::uint8_t> flags) {
  const auto m = static_cast<index_t>(row_ptr.size() - 1);
  std::fill(flags.begin(), flags.end(), std::uint8_t{0});
  flags[0] = 1;
  DescriptorInfo info;
  for (index_t j = start; j <= stop; ++j) {
    if (j < stop && row_ptr[j] == row_ptr[j + 1]) info.dirty = true;
    if (j > start && j < m && row_ptr[j] < row_ptr[j + 1]) {
      const std::int64_t off = static_cast<std::int64_t>(row_ptr[j]) - boundary;
      if (off > 0 && off < tile_size) flags[static_cast<std::size_t>(off)] = 1;
    }
  }
  info.continuation = static_cast<std::int64_t>(row_ptr[start]) < boundary;
  return info;
}

// Elementwise a[p] * x[col[p]] for the tile at `boundary`; padding past nnz
// contributes zero, which merges silently into the final segment.
template <typename S>
void compute_products(const CsrMatrix<S>& a, std::span<const S> x, std::int64_t boundary,
                      std::span<S> workspace) {
  const std::int64_t nnz = a.nnz();
  for (std::size_t p = 0; p < workspace.size(); ++p) {
    const std::int64_t g = boundary + static_cast<std::int64_t>(p);
    workspace[p] = g < nnz ? a.values[g] * x[a.col_idx[g]] : S{};
  }
}

// Speculatively executes one tile: reduce segments, write each owned segment
// total to its predicted row, divert the bunch's first row to the
// synchronizer, and enroll the tile for repair if its row range holds an
// empty row. `bunch_first_row` is the bunch's tile_offset[0].
template <typename S>
void execute_tile(const CsrMatrix<S>& a, std::span<const S> x, const SpmvConfig& cfg,
                  std::int64_t tile_id, index_t start, index_t stop,
                  index_t bunch_first_row, std::int64_t bunch_id, BunchState<S>& state,
                  std::span<S> y, SideArrays<S>& side) {
  const std::int64_t tile_size = static_cast<std::int64_t>(cfg.W) * cfg.T;
  const std::int64_t boundary = tile_id * tile_size;

  const DescriptorInfo info =
      build_descriptor(std::span<const index_t>(a.row_ptr), start, stop, boundary,
                       tile_size, std::span<std::uint8_t>(state.flags));
  compute_products(a, x, boundary, std::span<S>(state.workspace));
  if (info.continuation) state.workspace[0] += state.transmitter;

  segmented_reduction_tile(std::span<S>(state.workspace),
                           SegmentDescriptor(state.flags), cfg.W,
                           std::span<index_t>(state.ts), std::span<index_t>(state.tc));
  exclusive_scan(std::span<const index_t>(state.tc), std::span<index_t>(state.y_index));

  for (int j = 0; j < cfg.T; ++j) {
    const std::size_t lane = static_cast<std::size_t>(j) * cfg.W +
                             static_cast<std::size_t>(state.ts[j]);
    for (index_t k = 0; k < state.tc[j]; ++k) {
      const index_t idx = start + state.y_index[j] + k;
      const S sum = state.workspace[lane + static_cast<std::size_t>(k)];
      if (idx == bunch_first_row) {
        // Later tiles of the bunch overwrite with a larger cumulative prefix.
        side.synchronizer[bunch_id] = {idx, sum};
      } else {
        y[idx] = sum;
      }
      if (idx == stop) state.transmitter = sum;
    }
  }

  if (info.dirty) {
    std::int64_t slot;
#pragma omp atomic capture
    slot = side.dirty_count++;
    side.speculator[static_cast<std::size_t>(slot)] = {tile_id, start, stop};
    // Predictions past an empty row are unreliable; the carry restarts clean
    // and repair re-homes whatever this tile misplaced.
    state.transmitter = S{};
  }
}

// Runs the bunch's S tiles in order, threading the transmitter carry. Tiles
// wholly past nnz are skipped: they would resolve start = stop = num_rows and
// contribute nothing. Requires y zero-initialized.
template <typename S>
void execute_bunch(const CsrMatrix<S>& a, std::span<const S> x, std::int64_t bunch_id,
                   const SpmvConfig& cfg, BunchState<S>& state, std::span<S> y,
                   SideArrays<S>& side) {
  const std::int64_t tile_size = static_cast<std::int64_t>(cfg.W) * cfg.T;
  const std::int64_t nnz = a.nnz();
  position_tiles(std::span<const index_t>(a.row_ptr), bunch_id, cfg,
                 std::span<index_t>(state.tile_offset));
  state.transmitter = S{};
  for (int i = 0; i < cfg.S; ++i) {
    const std::int64_t tile_id = bunch_id * cfg.S + i;
    if (tile_id * tile_size >= nnz) break;
    execute_tile(a, x, cfg, tile_id, state.tile_offset[i], state.tile_offset[i + 1],
                 state.tile_offset[0], bunch_id, state, y, side);
  }
}

// Stage 1: all bunches in parallel. Direct y writes of distinct bunches are
// disjoint, every bunch touches only its own synchronizer slot, and dirty
// tiles reserve speculator slots atomically, so any interleaving produces the
// same state up to speculator order (canonicalized before repair).
template <typename S>
StageResult<S> speculative_stage(const CsrMatrix<S>& a, std::span<const S> x,
                                 const SpmvConfig& cfg) {
  if (static_cast<index_t>(x.size()) != a.num_cols) {
    throw std::invalid_argument("speculative_stage: x length does not match num_cols");
  }
  const Plan plan = make_plan(a.nnz(), cfg);
  StageResult<S> r;
  r.y.assign(static_cast<std::size_t>(a.num_rows), S{});
  r.side.synchronizer.assign(static_cast<std::size_t>(plan.num_bunches), {});
  r.side.speculator.assign(static_cast<std::size_t>(plan.num_tiles), {});
  r.side.dirty_count = 0;

  std::span<S> y(r.y);
  const std::int64_t num_bunches = plan.num_bunches;
  const int chunk = cfg.B;
#pragma omp parallel num_threads(cfg.workers)
  {
    BunchState<S> state(cfg);
#pragma omp for schedule(dynamic, chunk)
    for (std::int64_t b = 0; b < num_bunches; ++b) {
      execute_bunch(a, x, b, cfg, state, y, r.side);
    }
  }
  return r;
}

// Stage 2a: fold the parked first-row sums back in, in bunch order.
template <typename S>
void synchronize(std::span<S> y, const SideArrays<S>& side) {
  for (const auto& entry : side.synchronizer) {
    y[entry.idx] += entry.val;
  }
}

// Stage 2b: re-home the segment sums that dirty tiles stored at predicted
// rows start+q. True homes L are the tile's row start plus its segment heads;
// walking q downward never clobbers an unconsumed source because L[q] >=
// start+q. Slot 0 is the tile's first row and is never moved. Runs strictly
// after synchronize.
template <typename S>
void repair_dirty_tiles(std::span<S> y, std::span<const index_t> row_ptr,
                        const SideArrays<S>& side, const SpmvConfig& cfg) {
  const auto m = static_cast<index_t>(row_ptr.size() - 1);
  const std::int64_t tile_size = static_cast<std::int64_t>(cfg.W) * cfg.T;

  std::vector<SpeculatorEntry> entries(
      side.speculator.begin(),
      side.speculator.begin() + static_cast<std::ptrdiff_t>(side.dirty_count));
  std::sort(entries.begin(), entries.end(),
            [](const SpeculatorEntry& a, const SpeculatorEntry& b) {
              return a.start != b.start ? a.start < b.start : a.tile_id < b.tile_id;
            });

  std::vector<index_t> homes;
  for (const SpeculatorEntry& e : entries) {
    const std::int64_t boundary = e.tile_id * tile_size;
    const bool in_range = e.tile_id >= 0 && e.start >= 0 && e.start <= e.stop && e.stop <= m;
    if (!in_range || row_ptr[e.start] > boundary ||
        (e.start < m && row_ptr[e.start + 1] <= boundary)) {
      throw std::runtime_error("repair_dirty_tiles: speculator entry inconsistent with row_ptr");
    }
    homes.clear();
    homes.push_back(e.start);
    for (index_t j = e.start + 1; j <= e.stop; ++j) {
      if (j < m && row_ptr[j] < row_ptr[j + 1]) {
        const std::int64_t off = static_cast<std::int64_t>(row_ptr[j]) - boundary;
        if (off > 0 && off < tile_size) homes.push_back(j);
      }
    }
    for (auto q = static_cast<std::int64_t>(homes.size()) - 1; q >= 1; --q) {
      const index_t predicted = e.start + static_cast<index_t>(q);
      if (homes[static_cast<std::size_t>(q)] != predicted) {
        y[homes[static_cast<std::size_t>(q)]] += y[predicted];
        y[predicted] = S{};
      }
    }
  }
}

// y = A*x via speculative execution plus serial synchronize/repair. Results
// are bit-identical for any worker count. Optional stats report the plan and
// the number of dirty tiles observed.
template <typename S>
DenseVector<S> spmv(const CsrMatrix<S>& a, std::span<const S> x, const SpmvConfig& cfg,
                    SpmvStats* stats = nullptr) {
  StageResult<S> r = speculative_stage(a, x, cfg);
  synchronize(std::span<S>(r.y), r.side);
  repair_dirty_tiles(std::span<S>(r.y), std::span<const index_t>(a.row_ptr), r.side, cfg);
  if (stats) {
    stats->plan = make_plan(a.nnz(), cfg);
    stats->dirty_tiles = r.side.dirty_count;
  }
  return std::move(r.y);
}

struct KernelWork {
  std::int64_t search_probes = 0;
  std::int64_t scan_steps = 0;
  std::int64_t total() const { return search_probes + scan_steps; }
};

// The W*T-dependent work terms: actual positioning probe count plus the
// per-tile T-element scans. Used to check that work shrinks as tiles grow.
inline KernelWork count_kernel_work(std::span<const index_t> row_ptr, std::int64_t nnz,
                                    const SpmvConfig& cfg) {
  const Plan plan = make_plan(nnz, cfg);
  KernelWork work;
  for (std::int64_t b = 0; b < plan.num_bunches; ++b) {
    const std::int64_t base = b * cfg.S * plan.tile_size;
    for (int i = 0; i <= cfg.S; ++i) {
      binary_search_rightmost_counted(row_ptr, base + i * plan.tile_size,
                                      work.search_probes);
    }
  }
  work.scan_steps = plan.num_tiles * cfg.T;
  return work;
}

// Nonzeros each bunch processes: min(nnz, (b+1)*S*W*T) - b*S*W*T.
inline std::vector<std::int64_t> bunch_nnz_loads(std::int64_t nnz, const SpmvConfig& cfg) {
  const Plan plan = make_plan(nnz, cfg);
  const std::int64_t span = cfg.S * plan.tile_size;
  std::vector<std::int64_t> loads(static_cast<std::size_t>(plan.num_bunches));
  for (std::int64_t b = 0; b < plan.num_bunches; ++b) {
    loads[static_cast<std::size_t>(b)] = std::min(nnz, (b + 1) * span) - b * span;
  }
  return loads;
}

// Static contiguous split of bunches across workers; worker w takes
// [w*k/workers, (w+1)*k/workers).
inline std::vector<std::int64_t> spec_worker_loads(std::int64_t nnz, const SpmvConfig& cfg,
                                                   int workers) {
  const auto bunch = bunch_nnz_loads(nnz, cfg);
  const auto k = static_cast<std::int64_t>(bunch.size());
  std::vector<std::int64_t> loads(static_cast<std::size_t>(workers), 0);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = k * w / workers;
    const std::int64_t hi = k * (w + 1) / workers;
    for (std::int64_t b = lo; b < hi; ++b) loads[w] += bunch[static_cast<std::size_t>(b)];
  }
  return loads;
}

// Naive row partitioning: worker w takes rows [w*m/workers, (w+1)*m/workers).
template <typename S>
std::vector<std::int64_t> rowblock_worker_loads(const CsrMatrix<S>& a, int workers) {
  std::vector<std::int64_t> loads(static_cast<std::size_t>(workers), 0);
  const std::int64_t m = a.num_rows;
  for (int w = 0; w < workers; ++w) {
    const auto lo = static_cast<std::size_t>(m * w / workers);
    const auto hi = static_cast<std::size_t>(m * (w + 1) / workers);
    loads[w] = a.row_ptr[hi] - a.row_ptr[lo];
  }
  return loads;
}

}  // namespace specspmv
