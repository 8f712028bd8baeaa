// Copyright 2026 The repscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar reference kernels against a naive oracle, and the AVX2 variants
// against the scalar references. Counting kernels must agree exactly; the
// floating-point kernels agree to a tolerance scaled by the reduction length
// (FMA and lane-wise partial sums reassociate the additions).

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "repscope/simd/kernels.hpp"

using namespace repscope;

namespace {

template <class T>
std::vector<T> random_vector(std::mt19937_64& gen, std::size_t n, double zero_fraction = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), z(0.0, 1.0);
  std::vector<T> v(n);
  for (auto& x : v) x = z(gen) < zero_fraction ? T(0) : static_cast<T>(u(gen));
  return v;
}

template <class T>
void naive_gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
                std::size_t ldb, T* c, std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = accumulate ? c[i * ldc + j] : 0.0L;
      for (std::size_t p = 0; p < k; ++p) s += static_cast<long double>(a[i * lda + p]) * b[p * ldb + j];
      c[i * ldc + j] = static_cast<T>(s);
    }
}

template <class T>
double tol(std::size_t len) {
  return (std::is_same_v<T, float> ? 4e-6 : 1e-14) * static_cast<double>(len + 1);
}

template <class T>
void check_gemm(const simd::KernelTable& table, std::mt19937_64& gen) {
  const auto gemm = [&] {
    if constexpr (std::is_same_v<T, float>)
      return table.gemm_f32;
    else
      return table.gemm_f64;
  }();
  for (std::size_t m : {1u, 3u, 7u, 16u, 33u})
    for (std::size_t n : {1u, 5u, 8u, 17u, 64u})
      for (std::size_t k : {1u, 2u, 9u, 31u}) {
        const std::size_t lda = k + 2, ldb = n + 1, ldc = n + 3;
        const auto a = random_vector<T>(gen, m * lda);
        const auto b = random_vector<T>(gen, k * ldb);
        for (bool acc : {false, true}) {
          auto want = random_vector<T>(gen, m * ldc);
          auto got = want;
          naive_gemm(m, n, k, a.data(), lda, b.data(), ldb, want.data(), ldc, acc);
          gemm(m, n, k, a.data(), lda, b.data(), ldb, got.data(), ldc, acc);
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < ldc; ++j) {
              const double w = want[i * ldc + j], g = got[i * ldc + j];
              if (j >= n) {
                REQUIRE(g == w);  // padding columns untouched
              } else {
                REQUIRE(std::abs(g - w) <= tol<T>(k) * (1.0 + std::abs(w)));
              }
            }
        }
      }
}

template <class T>
void check_vector_kernels(const simd::KernelTable& ref, const simd::KernelTable& test, std::mt19937_64& gen) {
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 100u, 1023u}) {
    const auto x = random_vector<T>(gen, n, 0.3);
    const auto y = random_vector<T>(gen, n, 0.3);
    if constexpr (std::is_same_v<T, float>) {
      CHECK(test.count_zeros_f32(x.data(), n) == ref.count_zeros_f32(x.data(), n));
      CHECK(std::abs(test.dot_f32(x.data(), y.data(), n) - ref.dot_f32(x.data(), y.data(), n)) <= tol<T>(n));
      CHECK(std::abs(test.sqdist_f32(x.data(), y.data(), n) - ref.sqdist_f32(x.data(), y.data(), n)) <=
            tol<T>(n) * 4);
      auto ya = y, yb = y;
      ref.axpy_f32(0.75f, x.data(), ya.data(), n);
      test.axpy_f32(0.75f, x.data(), yb.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ya[i] - yb[i]) <= 1e-6);
    } else {
      CHECK(test.count_zeros_f64(x.data(), n) == ref.count_zeros_f64(x.data(), n));
      CHECK(std::abs(test.dot_f64(x.data(), y.data(), n) - ref.dot_f64(x.data(), y.data(), n)) <= tol<T>(n));
      CHECK(std::abs(test.sqdist_f64(x.data(), y.data(), n) - ref.sqdist_f64(x.data(), y.data(), n)) <=
            tol<T>(n) * 4);
      auto ya = y, yb = y;
      ref.axpy_f64(0.75, x.data(), ya.data(), n);
      test.axpy_f64(0.75, x.data(), yb.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ya[i] - yb[i]) <= 1e-15);
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels match naive oracles") {
  std::mt19937_64 gen(1);
  const auto& s = simd::scalar_table();
  CHECK(s.backend == simd::Backend::scalar);
  check_gemm<float>(s, gen);
  check_gemm<double>(s, gen);
  for (std::size_t n : {0u, 1u, 9u, 250u}) {
    const auto x = random_vector<double>(gen, n, 0.5);
    const auto y = random_vector<double>(gen, n);
    std::size_t zeros = 0;
    long double dot = 0, dist = 0;
    for (std::size_t i = 0; i < n; ++i) {
      zeros += x[i] == 0.0;
      dot += static_cast<long double>(x[i]) * y[i];
      dist += static_cast<long double>(x[i] - y[i]) * (x[i] - y[i]);
    }
    CHECK(s.count_zeros_f64(x.data(), n) == zeros);
    CHECK(s.dot_f64(x.data(), y.data(), n) == doctest::Approx(static_cast<double>(dot)).epsilon(1e-13));
    CHECK(s.sqdist_f64(x.data(), y.data(), n) == doctest::Approx(static_cast<double>(dist)).epsilon(1e-13));
  }
}

TEST_CASE("count_zeros treats -0.0 as zero and NaN as non-zero") {
  const std::vector<double> d = {0.0, -0.0, std::numeric_limits<double>::quiet_NaN(), 1e-300, 0.0};
  const std::vector<float> f = {0.0f, -0.0f, std::numeric_limits<float>::quiet_NaN(), 1e-30f, 0.0f,
                                0.0f, 1.0f,  0.0f,  -0.0f};
  CHECK(simd::scalar_table().count_zeros_f64(d.data(), d.size()) == 3);
  CHECK(simd::scalar_table().count_zeros_f32(f.data(), f.size()) == 6);
  if (simd::available(simd::Backend::avx2)) {
    CHECK(simd::avx2_table()->count_zeros_f64(d.data(), d.size()) == 3);
    CHECK(simd::avx2_table()->count_zeros_f32(f.data(), f.size()) == 6);
  }
}

TEST_CASE("AVX2 kernels agree with the scalar references") {
  if (!simd::available(simd::Backend::avx2)) {
    MESSAGE("AVX2/FMA not available on this machine or build; equivalence test skipped");
    return;
  }
  std::mt19937_64 gen(2);
  const auto& ref = simd::scalar_table();
  const auto& avx = *simd::avx2_table();
  CHECK(avx.backend == simd::Backend::avx2);
  check_gemm<float>(avx, gen);
  check_gemm<double>(avx, gen);
  check_vector_kernels<float>(ref, avx, gen);
  check_vector_kernels<double>(ref, avx, gen);
}

TEST_CASE("runtime selection switches the active table") {
  const auto original = simd::active().backend;
  simd::select(simd::Backend::scalar);
  CHECK(simd::active().backend == simd::Backend::scalar);
  if (simd::available(simd::Backend::avx2)) {
    simd::select(simd::Backend::avx2);
    CHECK(simd::active().backend == simd::Backend::avx2);
  } else {
    CHECK_THROWS(simd::select(simd::Backend::avx2));
  }
  simd::select(original);
}
