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

#include <fstream>
#include <iterator>

#include "repscope/common/error.hpp"
#include "repscope/io/formats.hpp"

namespace repscope::io {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseErrorKind::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ParseError(ParseErrorKind::io, "read failed for " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

IdxArray parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw ParseError(ParseErrorKind::truncated, "IDX header shorter than 4 bytes");
  if (bytes[0] != 0 || bytes[1] != 0) throw ParseError(ParseErrorKind::bad_magic, "IDX magic must start 00 00");
  if (bytes[2] != 0x08)
    throw ParseError(ParseErrorKind::unsupported_dtype, "IDX dtype " + std::to_string(bytes[2]) + " (only 0x08)");
  const std::size_t ndim = bytes[3];
  if (ndim == 0) throw ParseError(ParseErrorKind::bad_size, "IDX with zero dimensions");
  const std::size_t header = 4 + 4 * ndim;
  if (bytes.size() < header) throw ParseError(ParseErrorKind::truncated, "IDX dimension block cut short");

  IdxArray out;
  std::size_t count = 1;
  for (std::size_t i = 0; i < ndim; ++i) {
    const auto* p = bytes.data() + 4 + 4 * i;
    const std::uint32_t d = (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
                            (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
    out.dims.push_back(d);
    count *= d;
  }
  const std::size_t payload = bytes.size() - header;
  if (payload < count)
    throw ParseError(ParseErrorKind::truncated,
                     "IDX payload has " + std::to_string(payload) + " bytes, expected " + std::to_string(count));
  if (payload > count) throw ParseError(ParseErrorKind::length_mismatch, "IDX has trailing bytes");
  out.values.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return out;
}

IdxContent decode_idx(std::span<const std::uint8_t> bytes) {
  IdxArray arr = parse_idx(bytes);
  if (arr.dims.size() == 1) {
    return std::vector<std::uint32_t>(arr.values.begin(), arr.values.end());
  }
  if (arr.dims.size() == 3) {
    if (arr.dims[0] == 0) throw ParseError(ParseErrorKind::empty, "IDX image file holds no images");
    std::vector<double> px(arr.values.size());
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = arr.values[i] / 255.0;
    return ActTensor4({arr.dims[0], 1, arr.dims[1], arr.dims[2]}, std::move(px), SourceTag::raw);
  }
  throw ParseError(ParseErrorKind::bad_size,
                   "IDX with " + std::to_string(arr.dims.size()) + " dimensions is neither labels nor images");
}

IdxContent read_idx(const std::filesystem::path& path) { return decode_idx(read_file_bytes(path)); }

LabeledDataset read_idx_dataset(const std::filesystem::path& images, const std::filesystem::path& labels,
                                std::size_t class_count) {
  auto img = read_idx(images);
  auto lab = read_idx(labels);
  if (!std::holds_alternative<ActTensor4>(img))
    throw ParseError(ParseErrorKind::bad_size, images.string() + " is not an image file");
  if (!std::holds_alternative<std::vector<std::uint32_t>>(lab))
    throw ParseError(ParseErrorKind::bad_size, labels.string() + " is not a label file");
  LabeledDataset ds{std::move(std::get<ActTensor4>(img)), std::move(std::get<std::vector<std::uint32_t>>(lab)),
                    class_count};
  if (ds.labels.size() != ds.images.dims().n)
    throw ParseError(ParseErrorKind::length_mismatch, "image and label counts differ");
  for (auto l : ds.labels)
    if (l >= class_count) throw ParseError(ParseErrorKind::bad_value, "label " + std::to_string(l) + " out of range");
  return ds;
}

}  // namespace repscope::io
