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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace repscope {

enum class SourceTag : std::uint8_t { raw = 0, post_relu = 1 };

const char* to_string(SourceTag t) noexcept;

struct Dims4 {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t h = 0;
  std::size_t w = 0;

  std::size_t count() const noexcept { return n * c * h * w; }
  std::size_t per_sample() const noexcept { return c * h * w; }
  std::size_t spatial() const noexcept { return h * w; }

  friend bool operator==(const Dims4&, const Dims4&) = default;
};

std::string to_string(const Dims4& d);

/// Immutable N x C x H x W activation tensor, row-major in (n, c, h, w).
///
/// Construction validates the invariants: every extent >= 1, data length
/// matches, all values finite, and post_relu tensors are non-negative.
class ActTensor4 {
 public:
  ActTensor4(Dims4 dims, std::vector<double> data, SourceTag tag = SourceTag::raw);

  const Dims4& dims() const noexcept { return dims_; }
  SourceTag tag() const noexcept { return tag_; }
  std::span<const double> data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t offset(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const noexcept {
    return ((n * dims_.c + c) * dims_.h + h) * dims_.w + w;
  }
  double at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const noexcept {
    return data_[offset(n, c, h, w)];
  }

  /// Contiguous slab of one sample's C*H*W values.
  std::span<const double> sample(std::size_t n) const noexcept {
    return std::span<const double>(data_).subspan(n * dims_.per_sample(), dims_.per_sample());
  }

  /// New tensor holding the listed samples in the listed order.
  ActTensor4 gather(std::span<const std::size_t> samples) const;

  /// Releases the storage; the tensor must not be used afterwards.
  std::vector<double> release() && { return std::move(data_); }

 private:
  Dims4 dims_;
  std::vector<double> data_;
  SourceTag tag_;
};

enum class AxisTag : std::uint8_t { by_channel, by_sample, flat, spatial_mean };

const char* to_string(AxisTag t) noexcept;

/// Dense row-major 2D view produced by unfolding or reduction.
struct RepMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  AxisTag axis = AxisTag::flat;

  std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
  std::span<double> row(std::size_t r) noexcept { return std::span<double>(data).subspan(r * cols, cols); }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data[r * cols + c]; }

  /// Throws InvalidArgument unless rows*cols == data.size() and entries are finite.
  void validate() const;
};

/// Images plus integer class labels in [0, class_count).
struct LabeledDataset {
  ActTensor4 images;
  std::vector<std::uint32_t> labels;
  std::size_t class_count = 0;

  std::size_t size() const noexcept { return labels.size(); }
  void validate() const;
  LabeledDataset subset(std::span<const std::size_t> indices) const;
};

}  // namespace repscope
