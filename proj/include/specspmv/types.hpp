#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace specspmv {

// Storage index type. 32 bits cover every matrix this library targets; all
// intermediate boundary/size arithmetic is done in int64_t by the callers.
using index_t = std::int32_t;

template <typename S>
using DenseVector = std::vector<S>;

enum class Precision { sp, dp };

inline const char* to_string(Precision p) {
  return p == Precision::sp ? "sp" : "dp";
}

// Verification tolerance: |a - b| <= atol + rtol * max(|a|, |b|).
template <typename S>
struct Tolerance {
  double rtol;
  double atol;
};

template <typename S>
constexpr Tolerance<S> default_tolerance() {
  if constexpr (sizeof(S) == 4) {
    return {1e-5, 1e-30};
  } else {
    return {1e-12, 1e-30};
  }
}

template <typename S>
bool within_tolerance(S a, S b, Tolerance<S> tol = default_tolerance<S>()) {
  const double da = static_cast<double>(a);
  const double db = static_cast<double>(b);
  return std::abs(da - db) <=
         tol.atol + tol.rtol * std::max(std::abs(da), std::abs(db));
}

// Tolerance check for two differently-associated sums of the same terms.
// The forward error of any summation order is proportional to the sum of
// the term magnitudes, so `scale` (sum of |term|) joins the relative base.
// With a cancellation-free row scale == |result| and this reduces to the
// plain check above.
template <typename S>
bool within_tolerance_scaled(S a, S b, double scale,
                             Tolerance<S> tol = default_tolerance<S>()) {
  const double da = static_cast<double>(a);
  const double db = static_cast<double>(b);
  return std::abs(da - db) <=
         tol.atol + tol.rtol * std::max({std::abs(da), std::abs(db), scale});
}

// Largest elementwise relative deviation, guarded against zero denominators.
template <typename S>
double max_relative_error(const DenseVector<S>& a, const DenseVector<S>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = static_cast<double>(a[i]);
    const double db = static_cast<double>(b[i]);
    const double denom = std::max({std::abs(da), std::abs(db), 1e-30});
    worst = std::max(worst, std::abs(da - db) / denom);
  }
  return worst;
}

}  // namespace specspmv
