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

// On-disk formats: IDX (MNIST), CIFAR-10 binary batches and the ARTN tensor
// container. Every parser has a byte-span entry point so fixtures can be
// built in memory; malformed input raises ParseError with a distinct kind.

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "repscope/tensor/tensor.hpp"

namespace repscope::io {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// IDX: 00 00 <dtype> <ndim>, ndim big-endian u32 extents, payload.
// Only dtype 0x08 (unsigned byte) is supported.

struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> values;
};

IdxArray parse_idx(std::span<const std::uint8_t> bytes);

/// A 1-D IDX file becomes labels; a 3-D file (N, rows, cols) becomes an
/// (N, 1, rows, cols) tensor with pixels divided by 255.
using IdxContent = std::variant<ActTensor4, std::vector<std::uint32_t>>;

IdxContent read_idx(const std::filesystem::path& path);
IdxContent decode_idx(std::span<const std::uint8_t> bytes);

/// Pairs an image file with a label file; class_count defaults to 10.
LabeledDataset read_idx_dataset(const std::filesystem::path& images, const std::filesystem::path& labels,
                                std::size_t class_count = 10);

// ---------------------------------------------------------------------------
// CIFAR-10 binary batch: records of 1 label byte + 3072 channel-planar pixels.

inline constexpr std::size_t kCifarRecordBytes = 1 + 3 * 32 * 32;

LabeledDataset parse_cifar_batch(std::span<const std::uint8_t> bytes);
LabeledDataset read_cifar_batch(const std::filesystem::path& path);

/// Concatenates datasets with identical per-sample shape and class count.
LabeledDataset concat(std::span<const LabeledDataset> parts);

// ---------------------------------------------------------------------------
// ARTN container: "ARTN", version (1), dtype (1 = f64, 2 = f32), ndim,
// ndim x u64 LE extents, LE payload, trailing source-tag byte.

enum class ArtnDtype : std::uint8_t { f64 = 1, f32 = 2 };

inline constexpr std::uint8_t kArtnVersion = 1;

struct ArtnArray {
  std::vector<std::uint64_t> dims;
  std::variant<std::vector<double>, std::vector<float>> values;
  SourceTag tag = SourceTag::raw;

  ArtnDtype dtype() const noexcept {
    return values.index() == 0 ? ArtnDtype::f64 : ArtnDtype::f32;
  }
  std::size_t element_count() const noexcept;
};

std::vector<std::uint8_t> encode_artn(const ArtnArray& a);
ArtnArray decode_artn(std::span<const std::uint8_t> bytes);

void write_artn(const ArtnArray& a, const std::filesystem::path& path);
ArtnArray read_artn(const std::filesystem::path& path);

/// ActTensor4 <-> ARTN (ndim 4). With dtype f32 the values are narrowed.
void write_tensor(const ActTensor4& t, const std::filesystem::path& path, ArtnDtype dtype = ArtnDtype::f64);
ActTensor4 read_tensor(const std::filesystem::path& path);
ArtnArray to_artn(const ActTensor4& t, ArtnDtype dtype = ArtnDtype::f64);
ActTensor4 from_artn(const ArtnArray& a);

}  // namespace repscope::io
