#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "specspmv/types.hpp"

namespace specspmv {

// Coordinate-format staging area. Values are held in double regardless of the
// precision a kernel later runs at; conversion happens in one place.
struct CooMatrix {
  index_t num_rows = 0;
  index_t num_cols = 0;
  std::vector<index_t> rows;
  std::vector<index_t> cols;
  std::vector<double> values;

  index_t nnz() const { return static_cast<index_t>(values.size()); }
};

// Compressed sparse row matrix. Canonical form: row_ptr has num_rows + 1
// entries, col_idx is strictly increasing within each row.
template <typename S>
struct CsrMatrix {
  index_t num_rows = 0;
  index_t num_cols = 0;
  std::vector<index_t> row_ptr;
  std::vector<index_t> col_idx;
  std::vector<S> values;

  index_t nnz() const { return static_cast<index_t>(col_idx.size()); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

template <typename S>
ValidationReport validate_csr(const CsrMatrix<S>& a) {
  ValidationReport report;
  auto fail = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (a.num_rows < 0 || a.num_cols < 0) {
    fail("negative dimension");
    return report;
  }
  if (a.row_ptr.size() != static_cast<std::size_t>(a.num_rows) + 1) {
    fail("row_ptr length " + std::to_string(a.row_ptr.size()) + ", expected " +
         std::to_string(a.num_rows + 1));
    return report;
  }
  if (a.col_idx.size() != a.values.size()) {
    fail("col_idx length " + std::to_string(a.col_idx.size()) +
         " differs from values length " + std::to_string(a.values.size()));
    return report;
  }
  if (a.row_ptr.front() != 0) {
    fail("row_ptr[0] is " + std::to_string(a.row_ptr.front()) + ", expected 0");
  }
  if (a.row_ptr.back() != a.nnz()) {
    fail("row_ptr[num_rows] is " + std::to_string(a.row_ptr.back()) +
         ", expected nnz " + std::to_string(a.nnz()));
  }
  for (index_t r = 0; r < a.num_rows; ++r) {
    if (a.row_ptr[r] > a.row_ptr[r + 1]) {
      fail("row_ptr decreases at row " + std::to_string(r));
      return report;
    }
  }
  if (!report.ok()) return report;
  for (index_t r = 0; r < a.num_rows; ++r) {
    for (index_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      if (a.col_idx[p] < 0 || a.col_idx[p] >= a.num_cols) {
        fail("column index " + std::to_string(a.col_idx[p]) + " out of range at row " +
             std::to_string(r));
        return report;
      }
      if (p > a.row_ptr[r] && a.col_idx[p] <= a.col_idx[p - 1]) {
        fail("column indices not strictly increasing in row " + std::to_string(r));
        return report;
      }
    }
  }
  return report;
}

// Sorts entries row-major (stable, so duplicate values fold in input order)
// and sums duplicates. Result is canonical CSR.
inline CsrMatrix<double> coo_to_csr(const CooMatrix& coo) {
  std::vector<std::size_t> order(coo.values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&coo](std::size_t a, std::size_t b) {
    if (coo.rows[a] != coo.rows[b]) return coo.rows[a] < coo.rows[b];
    return coo.cols[a] < coo.cols[b];
  });

  CsrMatrix<double> csr;
  csr.num_rows = coo.num_rows;
  csr.num_cols = coo.num_cols;
  csr.row_ptr.assign(static_cast<std::size_t>(coo.num_rows) + 1, 0);
  csr.col_idx.reserve(order.size());
  csr.values.reserve(order.size());

  index_t last_r = -1;
  index_t last_c = -1;
  for (const std::size_t e : order) {
    const index_t r = coo.rows[e];
    const index_t c = coo.cols[e];
    if (r == last_r && c == last_c) {
      csr.values.back() += coo.values[e];
      continue;
    }
    csr.col_idx.push_back(c);
    csr.values.push_back(coo.values[e]);
    csr.row_ptr[static_cast<std::size_t>(r) + 1] += 1;
    last_r = r;
    last_c = c;
  }
  for (index_t r = 0; r < coo.num_rows; ++r) {
    csr.row_ptr[static_cast<std::size_t>(r) + 1] += csr.row_ptr[r];
  }
  return csr;
}

template <typename S>
CooMatrix csr_to_coo(const CsrMatrix<S>& a) {
  CooMatrix coo;
  coo.num_rows = a.num_rows;
  coo.num_cols = a.num_cols;
  coo.rows.reserve(a.col_idx.size());
  coo.cols.assign(a.col_idx.begin(), a.col_idx.end());
  coo.values.reserve(a.values.size());
  for (index_t r = 0; r < a.num_rows; ++r) {
    for (index_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      coo.rows.push_back(r);
      coo.values.push_back(static_cast<double>(a.values[p]));
    }
  }
  return coo;
}

template <typename S>
CsrMatrix<S> convert_precision(const CsrMatrix<double>& a) {
  CsrMatrix<S> out;
  out.num_rows = a.num_rows;
  out.num_cols = a.num_cols;
  out.row_ptr = a.row_ptr;
  out.col_idx = a.col_idx;
  out.values.assign(a.values.begin(), a.values.end());
  return out;
}

}  // namespace specspmv
