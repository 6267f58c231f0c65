#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "oracle.hpp"
#include "specspmv/baselines.hpp"

using namespace specspmv;
using namespace testutil;

namespace {

template <typename S>
bool bit_equal(const DenseVector<S>& a, const DenseVector<S>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(S)) == 0);
}

CsrMatrix<double> identity(index_t n) {
  CsrMatrix<double> a;
  a.num_rows = n;
  a.num_cols = n;
  a.row_ptr.resize(static_cast<std::size_t>(n) + 1);
  for (index_t i = 0; i <= n; ++i) a.row_ptr[static_cast<std::size_t>(i)] = i;
  for (index_t i = 0; i < n; ++i) {
    a.col_idx.push_back(i);
    a.values.push_back(1.0);
  }
  return a;
}

}  // namespace

TEST_CASE("all baselines agree on the 6x6 fixture") {
  const CsrMatrix<double> a = fixture_a();
  const DenseVector<double> x = fixture_a_x();
  CHECK(spmv_sequential(a, std::span<const double>(x)) == fixture_a_y());
  CHECK(spmv_row_parallel(a, std::span<const double>(x), 4) == fixture_a_y());
  CHECK(spmv_vector_emulated(a, std::span<const double>(x), 4) == fixture_a_y());
}

TEST_CASE("identity matrix reproduces the input vector") {
  const CsrMatrix<double> a = identity(37);
  TestRng rng(11);
  const DenseVector<double> x = random_x<double>(rng, 37);
  CHECK(spmv_sequential(a, std::span<const double>(x)) == x);
  CHECK(spmv_row_parallel(a, std::span<const double>(x), 3) == x);
  CHECK(spmv_vector_emulated(a, std::span<const double>(x), 8) == x);
}

TEST_CASE("empty rows produce exact zeros in every baseline") {
  CsrMatrix<double> a;
  a.num_rows = 5;
  a.num_cols = 4;
  a.row_ptr = {0, 2, 2, 3, 3, 4};
  a.col_idx = {0, 3, 1, 2};
  a.values = {2.0, 4.0, 8.0, 16.0};
  const DenseVector<double> x = {1.0, 10.0, 100.0, 1000.0};
  for (const auto& y : {spmv_sequential(a, std::span<const double>(x)),
                        spmv_row_parallel(a, std::span<const double>(x), 2),
                        spmv_vector_emulated(a, std::span<const double>(x), 2)}) {
    CHECK(y == DenseVector<double>{4002.0, 0.0, 80.0, 0.0, 1600.0});
  }
}

TEST_CASE("row-parallel baseline is bit-identical to sequential") {
  TestRng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const auto m = static_cast<index_t>(rng.range(1, 250));
    const auto n = static_cast<index_t>(rng.range(1, 120));
    const CsrMatrix<double> a = random_csr(rng, m, n, 15);
    const DenseVector<double> x = random_x<double>(rng, n);
    const DenseVector<double> want = spmv_sequential(a, std::span<const double>(x));
    for (const int workers : {1, 2, 8}) {
      CHECK(bit_equal(want, spmv_row_parallel(a, std::span<const double>(x), workers)));
    }
  }
}

TEST_CASE("lane-strided baseline matches sequential within tolerance") {
  TestRng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const auto m = static_cast<index_t>(rng.range(1, 120));
    const auto n = static_cast<index_t>(rng.range(1, 90));
    CsrMatrix<double> a = random_csr(rng, m, n, 20);
    const DenseVector<double> x = random_x<double>(rng, n);
    const DenseVector<double> want = spmv_sequential(a, std::span<const double>(x));
    const std::vector<double> scale = row_term_scales(a, std::span<const double>(x));
    for (const int T : {2, 8, 32}) {
      const DenseVector<double> got = spmv_vector_emulated(a, std::span<const double>(x), T);
      REQUIRE(got.size() == want.size());
      bool ok = true;
      for (std::size_t i = 0; i < got.size(); ++i) {
        ok = ok && within_tolerance_scaled(got[i], want[i], scale[i]);
      }
      CHECK(ok);
    }
  }
}

TEST_CASE("lane-strided baseline handles one long dense row") {
  CsrMatrix<double> a;
  a.num_rows = 1;
  a.num_cols = 1000;
  a.row_ptr = {0, 1000};
  TestRng rng(19);
  for (index_t c = 0; c < 1000; ++c) {
    a.col_idx.push_back(c);
    a.values.push_back(rng.uniform() * 2.0 - 1.0);
  }
  const DenseVector<double> x = random_x<double>(rng, 1000);
  const DenseVector<double> want = spmv_sequential(a, std::span<const double>(x));
  const std::vector<double> scale = row_term_scales(a, std::span<const double>(x));
  for (const int T : {1, 2, 16, 32}) {
    const DenseVector<double> got = spmv_vector_emulated(a, std::span<const double>(x), T);
    CHECK(within_tolerance_scaled(got[0], want[0], scale[0]));
  }
}

TEST_CASE("single-nonzero rows are exact in the lane-strided baseline") {
  CsrMatrix<double> a;
  a.num_rows = 3;
  a.num_cols = 3;
  a.row_ptr = {0, 1, 2, 3};
  a.col_idx = {2, 0, 1};
  a.values = {0.1, 0.2, 0.3};
  const DenseVector<double> x = {7.0, 11.0, 13.0};
  const DenseVector<double> y = spmv_vector_emulated(a, std::span<const double>(x), 8);
  CHECK(y[0] == 0.1 * 13.0);
  CHECK(y[1] == 0.2 * 7.0);
  CHECK(y[2] == 0.3 * 11.0);
}

TEST_CASE("baseline argument validation") {
  const CsrMatrix<double> a = fixture_a();
  const DenseVector<double> x = fixture_a_x();
  const DenseVector<double> short_x(3, 1.0);
  CHECK_THROWS_AS(spmv_sequential(a, std::span<const double>(short_x)),
                  std::invalid_argument);
  CHECK_THROWS_AS(spmv_row_parallel(a, std::span<const double>(x), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(spmv_vector_emulated(a, std::span<const double>(x), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(spmv_vector_emulated(a, std::span<const double>(x), 0),
                  std::invalid_argument);
}

TEST_CASE("single-precision path agrees with a high-precision oracle") {
  TestRng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = static_cast<index_t>(rng.range(1, 80));
    const auto n = static_cast<index_t>(rng.range(1, 60));
    const CsrMatrix<double> ad = random_csr(rng, m, n, 10);
    const CsrMatrix<float> af = convert_precision<float>(ad);
    const DenseVector<float> x = random_x<float>(rng, n);
    const DenseVector<float> got = spmv_sequential(af, std::span<const float>(x));
    const DenseVector<double> ref = oracle_spmv_highprec(af, std::span<const float>(x));
    const Tolerance<float> tol = default_tolerance<float>();
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(std::abs(static_cast<double>(got[i]) - ref[i]) <=
            tol.atol + tol.rtol * std::max(std::abs(ref[i]),
                                           static_cast<double>(std::abs(got[i]))));
    }
  }
}
