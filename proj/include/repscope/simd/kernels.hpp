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

#pragma once

// Data-parallel inner loops used by training and analysis. Every kernel has
// a portable scalar reference; an AVX2/FMA variant is compiled separately
// and picked at runtime when the CPU supports it.
//
// Selection: REPSCOPE_SIMD=scalar|avx2|auto (default auto), or
// simd::select() from code. Within one backend every kernel is a pure
// function of its inputs, and GEMM computes each output element with the
// same operation sequence wherever it falls in a block, so results never
// depend on the matrix extent (e.g. the batch size).

#include <cstddef>
#include <type_traits>

namespace repscope::simd {

enum class Backend { scalar, avx2 };

const char* to_string(Backend b) noexcept;

/// C[m x n] (=|+=) A[m x k] * B[k x n], all row-major with leading dims.
template <class T>
using GemmFn = void (*)(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda,
                        const T* b, std::size_t ldb, T* c, std::size_t ldc, bool accumulate);
template <class T>
using DotFn = T (*)(const T* x, const T* y, std::size_t n);
template <class T>
using AxpyFn = void (*)(T alpha, const T* x, T* y, std::size_t n);
template <class T>
using CountZerosFn = std::size_t (*)(const T* x, std::size_t n);
template <class T>
using SqDistFn = T (*)(const T* x, const T* y, std::size_t n);

struct KernelTable {
  Backend backend;
  GemmFn<float> gemm_f32;
  GemmFn<double> gemm_f64;
  DotFn<float> dot_f32;
  DotFn<double> dot_f64;
  AxpyFn<float> axpy_f32;
  AxpyFn<double> axpy_f64;
  CountZerosFn<float> count_zeros_f32;
  CountZerosFn<double> count_zeros_f64;
  SqDistFn<float> sqdist_f32;
  SqDistFn<double> sqdist_f64;
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table() noexcept;

bool cpu_has_avx2_fma() noexcept;

/// The table in use. Resolved on first call from REPSCOPE_SIMD.
const KernelTable& active() noexcept;

/// Forces a backend; throws InvalidArgument if unavailable on this build/CPU.
void select(Backend b);

/// Table for a specific backend, for equivalence testing.
const KernelTable& table_for(Backend b);

bool available(Backend b) noexcept;

// Typed front ends on the active table.

template <class T>
void gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
          std::size_t ldb, T* c, std::size_t ldc, bool accumulate = false) {
  if constexpr (std::is_same_v<T, float>)
    active().gemm_f32(m, n, k, a, lda, b, ldb, c, ldc, accumulate);
  else
    active().gemm_f64(m, n, k, a, lda, b, ldb, c, ldc, accumulate);
}

template <class T>
T dot(const T* x, const T* y, std::size_t n) {
  if constexpr (std::is_same_v<T, float>)
    return active().dot_f32(x, y, n);
  else
    return active().dot_f64(x, y, n);
}

template <class T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  if constexpr (std::is_same_v<T, float>)
    active().axpy_f32(alpha, x, y, n);
  else
    active().axpy_f64(alpha, x, y, n);
}

template <class T>
std::size_t count_zeros(const T* x, std::size_t n) {
  if constexpr (std::is_same_v<T, float>)
    return active().count_zeros_f32(x, n);
  else
    return active().count_zeros_f64(x, n);
}

template <class T>
T squared_distance(const T* x, const T* y, std::size_t n) {
  if constexpr (std::is_same_v<T, float>)
    return active().sqdist_f32(x, y, n);
  else
    return active().sqdist_f64(x, y, n);
}

}  // namespace repscope::simd
