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

// Reference kernels. Straight loops, no intrinsics.

#include <algorithm>
#include <vector>

#include "repscope/simd/kernels.hpp"

namespace repscope::simd {
namespace {

template <class T>
void gemm_ref(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
              std::size_t ldb, T* c, std::size_t ldc, bool accumulate) {
  std::vector<T> row(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(row.begin(), row.end(), T(0));
    for (std::size_t p = 0; p < k; ++p) {
      const T aip = a[i * lda + p];
      const T* brow = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
    T* crow = c + i * ldc;
    if (accumulate)
      for (std::size_t j = 0; j < n; ++j) crow[j] += row[j];
    else
      for (std::size_t j = 0; j < n; ++j) crow[j] = row[j];
  }
}

template <class T>
T dot_ref(const T* x, const T* y, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

template <class T>
void axpy_ref(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <class T>
std::size_t count_zeros_ref(const T* x, std::size_t n) {
  std::size_t z = 0;
  for (std::size_t i = 0; i < n; ++i) z += (x[i] == T(0)) ? 1 : 0;
  return z;
}

template <class T>
T sqdist_ref(const T* x, const T* y, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

constexpr KernelTable kScalarTable{
    Backend::scalar,
    &gemm_ref<float>,
    &gemm_ref<double>,
    &dot_ref<float>,
    &dot_ref<double>,
    &axpy_ref<float>,
    &axpy_ref<double>,
    &count_zeros_ref<float>,
    &count_zeros_ref<double>,
    &sqdist_ref<float>,
    &sqdist_ref<double>,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalarTable; }

}  // namespace repscope::simd
