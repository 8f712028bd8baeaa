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

// AVX2/FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after cpu_has_avx2_fma() returned true. Keep the
// includes minimal: any inline library code instantiated here would be
// compiled for AVX2 and could be picked by the linker for other callers.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "repscope/simd/kernels.hpp"

namespace repscope::simd {
namespace {

template <class T>
struct Lanes;

template <>
struct Lanes<float> {
  using Reg = __m256;
  static constexpr std::size_t width = 8;
  static Reg zero() { return _mm256_setzero_ps(); }
  static Reg load(const float* p) { return _mm256_loadu_ps(p); }
  static void store(float* p, Reg v) { _mm256_storeu_ps(p, v); }
  static Reg splat(float x) { return _mm256_set1_ps(x); }
  static Reg fma(Reg a, Reg b, Reg c) { return _mm256_fmadd_ps(a, b, c); }
  static Reg add(Reg a, Reg b) { return _mm256_add_ps(a, b); }
  static Reg sub(Reg a, Reg b) { return _mm256_sub_ps(a, b); }
  static float hsum(Reg v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 sh = _mm_movehdup_ps(lo);
    __m128 s = _mm_add_ps(lo, sh);
    sh = _mm_movehl_ps(sh, s);
    s = _mm_add_ss(s, sh);
    return _mm_cvtss_f32(s);
  }
  static unsigned zero_mask(Reg v) {
    return static_cast<unsigned>(
        _mm256_movemask_ps(_mm256_cmp_ps(v, _mm256_setzero_ps(), _CMP_EQ_OQ)));
  }
};

template <>
struct Lanes<double> {
  using Reg = __m256d;
  static constexpr std::size_t width = 4;
  static Reg zero() { return _mm256_setzero_pd(); }
  static Reg load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, Reg v) { _mm256_storeu_pd(p, v); }
  static Reg splat(double x) { return _mm256_set1_pd(x); }
  static Reg fma(Reg a, Reg b, Reg c) { return _mm256_fmadd_pd(a, b, c); }
  static Reg add(Reg a, Reg b) { return _mm256_add_pd(a, b); }
  static Reg sub(Reg a, Reg b) { return _mm256_sub_pd(a, b); }
  static double hsum(Reg v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d h = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, h));
  }
  static unsigned zero_mask(Reg v) {
    return static_cast<unsigned>(
        _mm256_movemask_pd(_mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_EQ_OQ)));
  }
};

inline float fma_scalar(float a, float b, float c) { return std::fma(a, b, c); }
inline double fma_scalar(double a, double b, double c) { return std::fma(a, b, c); }

// Writes one finished accumulator into C honoring the accumulate flag.
template <class T>
inline void emit(T* dst, typename Lanes<T>::Reg acc, bool accumulate) {
  using L = Lanes<T>;
  if (accumulate) acc = L::add(L::load(dst), acc);
  L::store(dst, acc);
}

// R rows x (V vectors) register block, full K sweep. Every output element is
// acc = fma(a[p], b[p], acc) for p = 0..k-1 starting from zero; the scalar
// column tail below repeats exactly that sequence.
template <class T, std::size_t R, std::size_t V>
inline void block(std::size_t k, const T* a, std::size_t lda, const T* b, std::size_t ldb, T* c,
                  std::size_t ldc, bool accumulate) {
  using L = Lanes<T>;
  typename L::Reg acc[R][V];
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t v = 0; v < V; ++v) acc[r][v] = L::zero();
  for (std::size_t p = 0; p < k; ++p) {
    typename L::Reg bv[V];
    for (std::size_t v = 0; v < V; ++v) bv[v] = L::load(b + p * ldb + v * L::width);
    for (std::size_t r = 0; r < R; ++r) {
      const auto av = L::splat(a[r * lda + p]);
      for (std::size_t v = 0; v < V; ++v) acc[r][v] = L::fma(av, bv[v], acc[r][v]);
    }
  }
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t v = 0; v < V; ++v) emit<T>(c + r * ldc + v * L::width, acc[r][v], accumulate);
}

template <class T, std::size_t R>
inline void row_panel(std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
                      std::size_t ldb, T* c, std::size_t ldc, bool accumulate) {
  constexpr std::size_t W = Lanes<T>::width;
  std::size_t j = 0;
  for (; j + 2 * W <= n; j += 2 * W) block<T, R, 2>(k, a, lda, b + j, ldb, c + j, ldc, accumulate);
  for (; j + W <= n; j += W) block<T, R, 1>(k, a, lda, b + j, ldb, c + j, ldc, accumulate);
  for (; j < n; ++j) {
    for (std::size_t r = 0; r < R; ++r) {
      T s = 0;
      for (std::size_t p = 0; p < k; ++p) s = fma_scalar(a[r * lda + p], b[p * ldb + j], s);
      T& dst = c[r * ldc + j];
      dst = accumulate ? dst + s : s;
    }
  }
}

template <class T>
void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
               std::size_t ldb, T* c, std::size_t ldc, bool accumulate) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) row_panel<T, 4>(n, k, a + i * lda, lda, b, ldb, c + i * ldc, ldc, accumulate);
  for (; i < m; ++i) row_panel<T, 1>(n, k, a + i * lda, lda, b, ldb, c + i * ldc, ldc, accumulate);
}

template <class T>
T dot_avx2(const T* x, const T* y, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t W = L::width;
  auto a0 = L::zero(), a1 = L::zero();
  std::size_t i = 0;
  for (; i + 2 * W <= n; i += 2 * W) {
    a0 = L::fma(L::load(x + i), L::load(y + i), a0);
    a1 = L::fma(L::load(x + i + W), L::load(y + i + W), a1);
  }
  for (; i + W <= n; i += W) a0 = L::fma(L::load(x + i), L::load(y + i), a0);
  T s = L::hsum(L::add(a0, a1));
  for (; i < n; ++i) s = fma_scalar(x[i], y[i], s);
  return s;
}

template <class T>
void axpy_avx2(T alpha, const T* x, T* y, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t W = L::width;
  const auto av = L::splat(alpha);
  std::size_t i = 0;
  for (; i + W <= n; i += W) L::store(y + i, L::fma(av, L::load(x + i), L::load(y + i)));
  for (; i < n; ++i) y[i] = fma_scalar(alpha, x[i], y[i]);
}

template <class T>
std::size_t count_zeros_avx2(const T* x, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t W = L::width;
  std::size_t z = 0;
  std::size_t i = 0;
  for (; i + W <= n; i += W) z += static_cast<std::size_t>(__builtin_popcount(L::zero_mask(L::load(x + i))));
  for (; i < n; ++i) z += (x[i] == T(0)) ? 1 : 0;
  return z;
}

template <class T>
T sqdist_avx2(const T* x, const T* y, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t W = L::width;
  auto a0 = L::zero(), a1 = L::zero();
  std::size_t i = 0;
  for (; i + 2 * W <= n; i += 2 * W) {
    const auto d0 = L::sub(L::load(x + i), L::load(y + i));
    const auto d1 = L::sub(L::load(x + i + W), L::load(y + i + W));
    a0 = L::fma(d0, d0, a0);
    a1 = L::fma(d1, d1, a1);
  }
  for (; i + W <= n; i += W) {
    const auto d0 = L::sub(L::load(x + i), L::load(y + i));
    a0 = L::fma(d0, d0, a0);
  }
  T s = L::hsum(L::add(a0, a1));
  for (; i < n; ++i) {
    const T d = x[i] - y[i];
    s = fma_scalar(d, d, s);
  }
  return s;
}

constexpr KernelTable kAvx2Table{
    Backend::avx2,
    &gemm_avx2<float>,
    &gemm_avx2<double>,
    &dot_avx2<float>,
    &dot_avx2<double>,
    &axpy_avx2<float>,
    &axpy_avx2<double>,
    &count_zeros_avx2<float>,
    &count_zeros_avx2<double>,
    &sqdist_avx2<float>,
    &sqdist_avx2<double>,
};

}  // namespace

const KernelTable* avx2_table_impl() noexcept { return &kAvx2Table; }

}  // namespace repscope::simd
