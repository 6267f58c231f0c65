#pragma once

#include <cstdint>
#include <stdexcept>

namespace specspmv {

// 2*nnz fused multiply-add flops over the runtime, in GFlop/s (10^9).
inline double throughput_gflops(std::int64_t nnz, double runtime_seconds) {
  if (!(runtime_seconds > 0.0)) {
    throw std::domain_error("throughput_gflops: runtime must be positive");
  }
  if (nnz < 0) {
    throw std::domain_error("throughput_gflops: nnz must be non-negative");
  }
  return 2.0 * static_cast<double>(nnz) / runtime_seconds / 1e9;
}

// Bytes moved per multiply: (m+1+nnz) indices plus (2*nnz+m) scalars (read
// value and x entry per nonzero, write y per row), in GB/s (2^30). Index and
// value widths stay explicit parameters.
inline double bandwidth_gbs(std::int64_t m, std::int64_t nnz, int index_bytes,
                            int value_bytes, double runtime_seconds) {
  if (!(runtime_seconds > 0.0)) {
    throw std::domain_error("bandwidth_gbs: runtime must be positive");
  }
  if (m < 0 || nnz < 0 || index_bytes <= 0 || value_bytes <= 0) {
    throw std::domain_error("bandwidth_gbs: sizes must be non-negative, widths positive");
  }
  const double bytes = static_cast<double>(m + 1 + nnz) * index_bytes +
                       static_cast<double>(2 * nnz + m) * value_bytes;
  return bytes / runtime_seconds / 1073741824.0;
}

}  // namespace specspmv
