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

#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace repscope::nn {

/// Mutable batch buffer used inside the network: (N, C, H, W) for spatial
/// activations, (N, D) for dense ones. Row-major.
template <class T>
struct Blob {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Blob() = default;
  explicit Blob(std::vector<std::size_t> s) : shape(std::move(s)), data(count(shape)) {}

  static std::size_t count(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
  }

  /// Reshapes, reallocating only when the element count grows.
  void resize(std::vector<std::size_t> s) {
    shape = std::move(s);
    data.resize(count(shape));
  }

  std::size_t size() const noexcept { return data.size(); }
  std::size_t batch() const noexcept { return shape.empty() ? 0 : shape[0]; }
  /// Elements per sample.
  std::size_t per_sample() const noexcept { return shape.empty() || shape[0] == 0 ? 0 : data.size() / shape[0]; }
  /// Product of the extents after the feature axis (1 for dense blobs).
  std::size_t inner() const noexcept {
    std::size_t n = 1;
    for (std::size_t i = 2; i < shape.size(); ++i) n *= shape[i];
    return n;
  }

  T* sample(std::size_t n) noexcept { return data.data() + n * per_sample(); }
  const T* sample(std::size_t n) const noexcept { return data.data() + n * per_sample(); }
};

std::string shape_string(const std::vector<std::size_t>& s);

}  // namespace repscope::nn
