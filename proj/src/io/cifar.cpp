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

#include "repscope/common/error.hpp"
#include "repscope/io/formats.hpp"

namespace repscope::io {

LabeledDataset parse_cifar_batch(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw ParseError(ParseErrorKind::empty, "CIFAR batch is empty");
  if (bytes.size() % kCifarRecordBytes != 0)
    throw ParseError(ParseErrorKind::bad_size, "CIFAR batch size " + std::to_string(bytes.size()) +
                                                   " is not a multiple of " + std::to_string(kCifarRecordBytes));
  const std::size_t n = bytes.size() / kCifarRecordBytes;
  constexpr std::size_t pixels = kCifarRecordBytes - 1;
  std::vector<double> data(n * pixels);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto* rec = bytes.data() + r * kCifarRecordBytes;
    if (rec[0] > 9) throw ParseError(ParseErrorKind::bad_value, "CIFAR label " + std::to_string(rec[0]));
    labels[r] = rec[0];
    // Records are already channel-planar (R plane, G plane, B plane), which
    // is exactly the (c, h, w) order of one sample.
    for (std::size_t i = 0; i < pixels; ++i) data[r * pixels + i] = rec[1 + i] / 255.0;
  }
  return LabeledDataset{ActTensor4({n, 3, 32, 32}, std::move(data), SourceTag::raw), std::move(labels), 10};
}

LabeledDataset read_cifar_batch(const std::filesystem::path& path) {
  return parse_cifar_batch(read_file_bytes(path));
}

LabeledDataset concat(std::span<const LabeledDataset> parts) {
  if (parts.empty()) throw InvalidArgument("concat: no datasets");
  const Dims4 first = parts.front().images.dims();
  std::vector<double> data;
  std::vector<std::uint32_t> labels;
  std::size_t n = 0;
  for (const auto& p : parts) {
    const auto& d = p.images.dims();
    if (d.c != first.c || d.h != first.h || d.w != first.w || p.class_count != parts.front().class_count)
      throw ShapeError("concat: datasets differ in sample shape or class count");
    auto src = p.images.data();
    data.insert(data.end(), src.begin(), src.end());
    labels.insert(labels.end(), p.labels.begin(), p.labels.end());
    n += d.n;
  }
  return LabeledDataset{ActTensor4({n, first.c, first.h, first.w}, std::move(data), SourceTag::raw),
                        std::move(labels), parts.front().class_count};
}

}  // namespace repscope::io
