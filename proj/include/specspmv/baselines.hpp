#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "specspmv/csr.hpp"
#include "specspmv/types.hpp"

namespace specspmv {

// Serial reference: rows in order, nonzeros left to right. Every other
// algorithm in this library is checked against it.
template <typename S>
DenseVector<S> spmv_sequential(const CsrMatrix<S>& a, std::span<const S> x) {
  if (static_cast<index_t>(x.size()) != a.num_cols) {
    throw std::invalid_argument("spmv_sequential: x length does not match num_cols");
  }
  DenseVector<S> y(static_cast<std::size_t>(a.num_rows), S{});
  for (index_t r = 0; r < a.num_rows; ++r) {
    S acc = S{};
    for (index_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      acc += a.values[p] * x[a.col_idx[p]];
    }
    y[static_cast<std::size_t>(r)] = acc;
  }
  return y;
}

// Per-row sum of |a_ij * x_j|, in double. This is the natural scale for
// comparing two summation orders of the same row: their difference is
// bounded by a small multiple of machine epsilon times this value even
// when the row sum itself cancels to near zero.
template <typename S>
std::vector<double> row_term_scales(const CsrMatrix<S>& a, std::span<const S> x) {
  if (static_cast<index_t>(x.size()) != a.num_cols) {
    throw std::invalid_argument("row_term_scales: x length does not match num_cols");
  }
  std::vector<double> scale(static_cast<std::size_t>(a.num_rows), 0.0);
  for (index_t r = 0; r < a.num_rows; ++r) {
    double acc = 0.0;
    for (index_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      acc += std::abs(static_cast<double>(a.values[p]) *
                      static_cast<double>(x[a.col_idx[p]]));
    }
    scale[static_cast<std::size_t>(r)] = acc;
  }
  return scale;
}

// Rows split across workers; per-row order matches the serial reference, so
// results are bit-identical to it for any worker count.
template <typename S>
DenseVector<S> spmv_row_parallel(const CsrMatrix<S>& a, std::span<const S> x,
                                 int workers) {
  if (static_cast<index_t>(x.size()) != a.num_cols) {
    throw std::invalid_argument("spmv_row_parallel: x length does not match num_cols");
  }
  if (workers < 1) {
    throw std::invalid_argument("spmv_row_parallel: workers must be >= 1");
  }
  DenseVector<S> y(static_cast<std::size_t>(a.num_rows), S{});
  const index_t m = a.num_rows;
#pragma omp parallel for schedule(static) num_threads(workers)
  for (index_t r = 0; r < m; ++r) {
    S acc = S{};
    for (index_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      acc += a.values[p] * x[a.col_idx[p]];
    }
    y[static_cast<std::size_t>(r)] = acc;
  }
  return y;
}

// Fixed-width SIMD emulation: each row's nonzeros are taken in T-strided
// chunks (lane t accumulates positions t, t+T, ...), then the T lane partials
// tree-reduce. Regrouped order, so results agree with the reference only to
// rounding. Requires T a power of two.
template <typename S>
DenseVector<S> spmv_vector_emulated(const CsrMatrix<S>& a, std::span<const S> x, int T) {
  if (static_cast<index_t>(x.size()) != a.num_cols) {
    throw std::invalid_argument("spmv_vector_emulated: x length does not match num_cols");
  }
  if (T < 1 || (T & (T - 1)) != 0) {
    throw std::invalid_argument("spmv_vector_emulated: T must be a power of two");
  }
  DenseVector<S> y(static_cast<std::size_t>(a.num_rows), S{});
  const index_t m = a.num_rows;
#pragma omp parallel
  {
    std::vector<S> lane(static_cast<std::size_t>(T));
#pragma omp for schedule(static)
    for (index_t r = 0; r < m; ++r) {
      const index_t lo = a.row_ptr[r];
      const index_t hi = a.row_ptr[r + 1];
      for (int t = 0; t < T; ++t) {
        S acc = S{};
        for (index_t p = lo + t; p < hi; p += T) {
          acc += a.values[p] * x[a.col_idx[p]];
        }
        lane[static_cast<std::size_t>(t)] = acc;
      }
      for (int stride = T / 2; stride > 0; stride /= 2) {
        for (int t = 0; t < stride; ++t) {
          lane[static_cast<std::size_t>(t)] += lane[static_cast<std::size_t>(t + stride)];
        }
      }
      y[static_cast<std::size_t>(r)] = lane[0];
    }
  }
  return y;
}

}  // namespace specspmv
