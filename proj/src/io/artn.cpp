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

#include <bit>
#include <cstring>

#include "repscope/common/error.hpp"
#include "repscope/io/formats.hpp"

namespace repscope::io {
namespace {

constexpr char kMagic[4] = {'A', 'R', 'T', 'N'};
constexpr std::size_t kFixedHeader = 4 + 1 + 1 + 1;

template <class U>
void put_le(std::vector<std::uint8_t>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <class U>
U get_le(const std::uint8_t* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

template <class F>
void put_values(std::vector<std::uint8_t>& out, const std::vector<F>& values) {
  using U = std::conditional_t<sizeof(F) == 8, std::uint64_t, std::uint32_t>;
  for (F v : values) put_le<U>(out, std::bit_cast<U>(v));
}

template <class F>
std::vector<F> get_values(const std::uint8_t* p, std::size_t count) {
  using U = std::conditional_t<sizeof(F) == 8, std::uint64_t, std::uint32_t>;
  std::vector<F> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = std::bit_cast<F>(get_le<U>(p + i * sizeof(F)));
  return v;
}

}  // namespace

std::size_t ArtnArray::element_count() const noexcept {
  std::size_t n = 1;
  for (auto d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

std::vector<std::uint8_t> encode_artn(const ArtnArray& a) {
  const std::size_t count = a.element_count();
  const std::size_t stored = std::visit([](const auto& v) { return v.size(); }, a.values);
  if (stored != count) throw InvalidArgument("ARTN: value count does not match dims");
  if (a.dims.size() > 255) throw InvalidArgument("ARTN: ndim exceeds 255");

  std::vector<std::uint8_t> out;
  const std::size_t elem = a.dtype() == ArtnDtype::f64 ? 8 : 4;
  out.reserve(kFixedHeader + 8 * a.dims.size() + elem * count + 1);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kArtnVersion);
  out.push_back(static_cast<std::uint8_t>(a.dtype()));
  out.push_back(static_cast<std::uint8_t>(a.dims.size()));
  for (auto d : a.dims) put_le<std::uint64_t>(out, d);
  std::visit([&](const auto& v) { put_values(out, v); }, a.values);
  out.push_back(static_cast<std::uint8_t>(a.tag));
  return out;
}

ArtnArray decode_artn(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFixedHeader) throw ParseError(ParseErrorKind::truncated, "ARTN header cut short");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw ParseError(ParseErrorKind::bad_magic, "not an ARTN file");
  if (bytes[4] != kArtnVersion)
    throw ParseError(ParseErrorKind::bad_version, "ARTN version " + std::to_string(bytes[4]));
  const std::uint8_t dtype = bytes[5];
  if (dtype != 1 && dtype != 2) throw ParseError(ParseErrorKind::unsupported_dtype, "ARTN dtype " + std::to_string(dtype));
  const std::size_t ndim = bytes[6];
  const std::size_t header = kFixedHeader + 8 * ndim;
  if (bytes.size() < header) throw ParseError(ParseErrorKind::truncated, "ARTN dimension block cut short");

  ArtnArray a;
  std::size_t count = 1;
  for (std::size_t i = 0; i < ndim; ++i) {
    a.dims.push_back(get_le<std::uint64_t>(bytes.data() + kFixedHeader + 8 * i));
    count *= static_cast<std::size_t>(a.dims.back());
  }
  const std::size_t elem = dtype == 1 ? 8 : 4;
  if (bytes.size() != header + elem * count + 1)
    throw ParseError(ParseErrorKind::length_mismatch,
                     "ARTN payload is " + std::to_string(bytes.size() - header) + " bytes, dims imply " +
                         std::to_string(elem * count + 1));
  const std::uint8_t* payload = bytes.data() + header;
  if (dtype == 1)
    a.values = get_values<double>(payload, count);
  else
    a.values = get_values<float>(payload, count);
  const std::uint8_t tag = bytes.back();
  if (tag > 1) throw ParseError(ParseErrorKind::bad_value, "ARTN source tag " + std::to_string(tag));
  a.tag = static_cast<SourceTag>(tag);
  return a;
}

void write_artn(const ArtnArray& a, const std::filesystem::path& path) { write_file_bytes(path, encode_artn(a)); }

ArtnArray read_artn(const std::filesystem::path& path) { return decode_artn(read_file_bytes(path)); }

ArtnArray to_artn(const ActTensor4& t, ArtnDtype dtype) {
  const auto& d = t.dims();
  ArtnArray a;
  a.dims = {d.n, d.c, d.h, d.w};
  a.tag = t.tag();
  auto src = t.data();
  if (dtype == ArtnDtype::f64)
    a.values = std::vector<double>(src.begin(), src.end());
  else
    a.values = std::vector<float>(src.begin(), src.end());
  return a;
}

ActTensor4 from_artn(const ArtnArray& a) {
  if (a.dims.size() != 4) throw ParseError(ParseErrorKind::bad_size, "ARTN tensor is not 4-dimensional");
  std::vector<double> data = std::visit(
      [](const auto& v) { return std::vector<double>(v.begin(), v.end()); }, a.values);
  return ActTensor4({a.dims[0], a.dims[1], a.dims[2], a.dims[3]}, std::move(data), a.tag);
}

void write_tensor(const ActTensor4& t, const std::filesystem::path& path, ArtnDtype dtype) {
  write_artn(to_artn(t, dtype), path);
}

ActTensor4 read_tensor(const std::filesystem::path& path) { return from_artn(read_artn(path)); }

}  // namespace repscope::io
