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

#include "repscope/tensor/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "repscope/common/error.hpp"

namespace repscope {

const char* to_string(SourceTag t) noexcept {
  return t == SourceTag::post_relu ? "post_relu" : "raw";
}

const char* to_string(AxisTag t) noexcept {
  switch (t) {
    case AxisTag::by_channel: return "by_channel";
    case AxisTag::by_sample: return "by_sample";
    case AxisTag::flat: return "flat";
    case AxisTag::spatial_mean: return "spatial_mean";
  }
  return "unknown";
}

std::string to_string(const Dims4& d) {
  return "(" + std::to_string(d.n) + "," + std::to_string(d.c) + "," + std::to_string(d.h) + "," +
         std::to_string(d.w) + ")";
}

ActTensor4::ActTensor4(Dims4 dims, std::vector<double> data, SourceTag tag)
    : dims_(dims), data_(std::move(data)), tag_(tag) {
  if (dims_.n == 0 || dims_.c == 0 || dims_.h == 0 || dims_.w == 0)
    throw InvalidArgument("ActTensor4: every extent must be >= 1, got " + to_string(dims_));
  if (data_.size() != dims_.count())
    throw InvalidArgument("ActTensor4: data length " + std::to_string(data_.size()) +
                          " does not match dims " + to_string(dims_));
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidArgument("ActTensor4: non-finite element");
  }
  if (tag_ == SourceTag::post_relu &&
      std::any_of(data_.begin(), data_.end(), [](double v) { return v < 0.0; }))
    throw InvalidArgument("ActTensor4: post_relu tensor holds a negative element");
}

ActTensor4 ActTensor4::gather(std::span<const std::size_t> samples) const {
  const std::size_t per = dims_.per_sample();
  std::vector<double> out;
  out.reserve(samples.size() * per);
  for (auto s : samples) {
    if (s >= dims_.n) throw InvalidArgument("ActTensor4::gather: sample index out of range");
    auto src = sample(s);
    out.insert(out.end(), src.begin(), src.end());
  }
  return ActTensor4({samples.size(), dims_.c, dims_.h, dims_.w}, std::move(out), tag_);
}

void RepMatrix::validate() const {
  if (rows * cols != data.size()) throw InvalidArgument("RepMatrix: rows*cols != data length");
  for (double v : data)
    if (!std::isfinite(v)) throw InvalidArgument("RepMatrix: non-finite entry");
}

void LabeledDataset::validate() const {
  if (labels.size() != images.dims().n)
    throw InvalidArgument("LabeledDataset: label count does not match sample count");
  if (class_count == 0) throw InvalidArgument("LabeledDataset: class_count must be positive");
  for (auto l : labels)
    if (l >= class_count) throw InvalidArgument("LabeledDataset: label out of range");
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::uint32_t> sub_labels;
  sub_labels.reserve(indices.size());
  for (auto i : indices) {
    if (i >= labels.size()) throw InvalidArgument("LabeledDataset::subset: index out of range");
    sub_labels.push_back(labels[i]);
  }
  return LabeledDataset{images.gather(indices), std::move(sub_labels), class_count};
}

}  // namespace repscope
