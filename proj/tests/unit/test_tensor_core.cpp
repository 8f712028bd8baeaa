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

#include <doctest.h>

#include <cstring>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/io/formats.hpp"
#include "repscope/tensor/tensor.hpp"
#include "repscope/tensor/unfold.hpp"

using namespace repscope;
using repscope::testing::TempDir;

namespace {

ActTensor4 iota_tensor(Dims4 d, SourceTag tag = SourceTag::raw) {
  std::vector<double> v(d.count());
  std::iota(v.begin(), v.end(), 1.0);
  return ActTensor4(d, std::move(v), tag);
}

std::vector<std::uint8_t> be32(std::uint32_t v) {
  return {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
          static_cast<std::uint8_t>(v)};
}

std::vector<std::uint8_t> idx_bytes(std::uint8_t ndim, const std::vector<std::uint32_t>& dims,
                                    const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> out = {0, 0, 0x08, ndim};
  for (auto d : dims)
    for (auto b : be32(d)) out.push_back(b);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

template <class Fn>
ParseErrorKind parse_error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected a ParseError");
  return ParseErrorKind::io;
}

}  // namespace

TEST_CASE("ActTensor4 validates extents, length and the post-ReLU range") {
  CHECK_THROWS_AS(ActTensor4({0, 1, 1, 1}, {}), InvalidArgument);
  CHECK_THROWS_AS(ActTensor4({1, 1, 1, 2}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(ActTensor4({1, 1, 1, 1}, {std::nan("")}), InvalidArgument);
  CHECK_THROWS_AS(ActTensor4({1, 1, 1, 1}, {-0.5}, SourceTag::post_relu), InvalidArgument);
  CHECK_NOTHROW(ActTensor4({1, 1, 1, 1}, {-0.5}, SourceTag::raw));
}

TEST_CASE("ActTensor4 indexing is row-major (n, c, h, w)") {
  const auto t = iota_tensor({2, 3, 4, 5});
  double expect = 1.0;
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t h = 0; h < 4; ++h)
        for (std::size_t w = 0; w < 5; ++w) CHECK(t.at(n, c, h, w) == expect++);
  const std::vector<std::size_t> pick = {1, 0, 1};
  const auto g = t.gather(pick);
  CHECK(g.dims() == Dims4{3, 3, 4, 5});
  CHECK(g.at(0, 2, 3, 4) == t.at(1, 2, 3, 4));
  CHECK(g.at(1, 0, 0, 0) == t.at(0, 0, 0, 0));
  const std::vector<std::size_t> out_of_range = {2};
  CHECK_THROWS_AS(t.gather(out_of_range), InvalidArgument);
}

TEST_CASE("unfold_channel gathers every value of a channel into one row") {
  SUBCASE("shape identity") {
    const auto m = unfold_channel(iota_tensor({2, 3, 2, 2}));
    CHECK(m.rows == 3);
    CHECK(m.cols == 8);
    CHECK(m.axis == AxisTag::by_channel);
  }
  SUBCASE("singleton") {
    const auto m = unfold_channel(ActTensor4({1, 1, 1, 1}, {5.0}));
    CHECK(m.rows == 1);
    CHECK(m.data == std::vector<double>{5.0});
  }
  SUBCASE("index-arithmetic oracle") {
    const auto t = iota_tensor({2, 2, 1, 2});
    const auto m = unfold_channel(t);
    CHECK(std::vector<double>(m.row(0).begin(), m.row(0).end()) == std::vector<double>{1, 2, 5, 6});
    CHECK(std::vector<double>(m.row(1).begin(), m.row(1).end()) == std::vector<double>{3, 4, 7, 8});
    // General oracle on a larger shape.
    const auto big = iota_tensor({3, 4, 2, 3});
    const auto mb = unfold_channel(big);
    for (std::size_t c = 0; c < 4; ++c) {
      std::size_t col = 0;
      for (std::size_t n = 0; n < 3; ++n)
        for (std::size_t h = 0; h < 2; ++h)
          for (std::size_t w = 0; w < 3; ++w) CHECK(mb(c, col++) == big.at(n, c, h, w));
    }
  }
  SUBCASE("refold inverts") {
    const auto t = iota_tensor({3, 2, 2, 3}, SourceTag::post_relu);
    const auto back = refold_channel(unfold_channel(t), t.dims(), t.tag());
    CHECK(back.dims() == t.dims());
    CHECK(std::equal(back.data().begin(), back.data().end(), t.data().begin()));
    CHECK_THROWS_AS(refold_channel(unfold_channel(t), Dims4{3, 2, 3, 3}), ShapeError);
  }
}

TEST_CASE("unfold_sample puts one sample per row") {
  const auto t = iota_tensor({2, 2, 1, 2});
  const auto m = unfold_sample(t);
  CHECK(std::vector<double>(m.row(0).begin(), m.row(0).end()) == std::vector<double>{1, 2, 3, 4});
  CHECK(std::vector<double>(m.row(1).begin(), m.row(1).end()) == std::vector<double>{5, 6, 7, 8});
  const auto k = unfold_sample(ActTensor4({1, 4, 1, 1}, {9, 8, 7, 6}));
  CHECK(k.rows == 1);
  CHECK(k.data == std::vector<double>{9, 8, 7, 6});
  const auto back = refold_sample(m, t.dims());
  CHECK(std::equal(back.data().begin(), back.data().end(), t.data().begin()));
}

TEST_CASE("flatten keeps the layout and conserves the sum") {
  CHECK(flatten(ActTensor4({1, 1, 1, 1}, {3.5})).data == std::vector<double>{3.5});
  CHECK(flatten(ActTensor4({2, 1, 1, 2}, {1, 2, 3, 4})).data == std::vector<double>{1, 2, 3, 4});
  std::mt19937_64 gen(5);
  const auto t = testing::random_relu_tensor(gen, {3, 4, 5, 2}, 0.3);
  const auto f = flatten(t);
  CHECK(f.rows * f.cols == t.size());
  CHECK(std::accumulate(f.data.begin(), f.data.end(), 0.0) ==
        doctest::Approx(std::accumulate(t.data().begin(), t.data().end(), 0.0)).epsilon(1e-12));
}

TEST_CASE("LabeledDataset validation and subsets") {
  LabeledDataset d{iota_tensor({3, 1, 1, 2}), {0, 2, 1}, 3};
  CHECK_NOTHROW(d.validate());
  const std::vector<std::size_t> pick = {2, 0};
  const auto s = d.subset(pick);
  CHECK(s.labels == std::vector<std::uint32_t>{1, 0});
  CHECK(s.images.at(0, 0, 0, 1) == 6.0);
  LabeledDataset bad{iota_tensor({2, 1, 1, 1}), {0, 5}, 3};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("derive_seed separates components and paths; Rng is reproducible") {
  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
  CHECK(derive_seed(1, "a", {0, 1}) != derive_seed(1, "a", {1, 0}));
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(7);
  const auto s = r.sample_without_replacement(50, 20);
  CHECK(s.size() == 20);
  CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 20);
  for (auto v : s) CHECK(v < 50);
  CHECK_THROWS_AS(r.sample_without_replacement(5, 6), InvalidArgument);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) mean += r.uniform01();
  CHECK(mean / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("IDX parsing against hand-built byte fixtures") {
  TempDir tmp("repscope_idx");
  SUBCASE("minimal label file") {
    const auto bytes = idx_bytes(1, {3}, {4, 0, 9});
    const auto content = io::decode_idx(bytes);
    REQUIRE(std::holds_alternative<std::vector<std::uint32_t>>(content));
    CHECK(std::get<std::vector<std::uint32_t>>(content) == std::vector<std::uint32_t>{4, 0, 9});
  }
  SUBCASE("two 28x28 images") {
    std::vector<std::uint8_t> px(2 * 28 * 28);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>((i * 7) % 256);
    const auto content = io::decode_idx(idx_bytes(3, {2, 28, 28}, px));
    REQUIRE(std::holds_alternative<ActTensor4>(content));
    const auto& t = std::get<ActTensor4>(content);
    CHECK(t.dims() == Dims4{2, 1, 28, 28});
    for (std::size_t n = 0; n < 2; ++n)
      for (std::size_t h = 0; h < 28; ++h)
        for (std::size_t w = 0; w < 28; ++w) CHECK(t.at(n, 0, h, w) == px[n * 784 + h * 28 + w] / 255.0);
  }
  SUBCASE("dataset from a file pair") {
    io::write_file_bytes(tmp / "i", idx_bytes(3, {2, 1, 2}, {0, 255, 51, 102}));
    io::write_file_bytes(tmp / "l", idx_bytes(1, {2}, {3, 1}));
    const auto d = io::read_idx_dataset(tmp / "i", tmp / "l");
    CHECK(d.images.dims() == Dims4{2, 1, 1, 2});
    CHECK(d.labels == std::vector<std::uint32_t>{3, 1});
    CHECK(d.images.at(0, 0, 0, 1) == 1.0);
    io::write_file_bytes(tmp / "l3", idx_bytes(1, {3}, {3, 1, 0}));
    CHECK_THROWS_AS(io::read_idx_dataset(tmp / "i", tmp / "l3"), ParseError);
    CHECK(parse_error_kind([&] { io::read_idx_dataset(tmp / "missing", tmp / "l"); }) == ParseErrorKind::io);
  }
  SUBCASE("corrupted headers") {
    auto bytes = idx_bytes(1, {3}, {1, 2, 3});
    auto bad = bytes;
    bad[1] = 1;
    CHECK(parse_error_kind([&] { io::decode_idx(bad); }) == ParseErrorKind::bad_magic);
    bad = bytes;
    bad[2] = 0x0B;
    CHECK(parse_error_kind([&] { io::decode_idx(bad); }) == ParseErrorKind::unsupported_dtype);
    bad.assign(bytes.begin(), bytes.end() - 1);
    CHECK(parse_error_kind([&] { io::decode_idx(bad); }) == ParseErrorKind::truncated);
    bad = bytes;
    bad.push_back(0);
    CHECK(parse_error_kind([&] { io::decode_idx(bad); }) == ParseErrorKind::length_mismatch);
    CHECK(parse_error_kind([&] { io::decode_idx(std::vector<std::uint8_t>{0, 0}); }) == ParseErrorKind::truncated);
    CHECK(parse_error_kind([&] { io::decode_idx(idx_bytes(3, {0, 2, 2}, {})); }) == ParseErrorKind::empty);
  }
}

TEST_CASE("CIFAR-10 binary batches") {
  std::vector<std::uint8_t> bytes;
  for (std::uint8_t label : {9, 2}) {
    bytes.push_back(label);
    for (std::size_t i = 0; i + 1 < io::kCifarRecordBytes; ++i)
      bytes.push_back(static_cast<std::uint8_t>((i + label) % 256));
  }
  const auto d = io::parse_cifar_batch(bytes);
  CHECK(d.images.dims() == Dims4{2, 3, 32, 32});
  CHECK(d.labels == std::vector<std::uint32_t>{9, 2});
  CHECK(d.class_count == 10);
  // Plane order R, G, B, each 32x32 row-major.
  CHECK(d.images.at(0, 1, 0, 0) == ((1024 + 9) % 256) / 255.0);
  CHECK(d.images.at(1, 2, 3, 4) == ((2048 + 3 * 32 + 4 + 2) % 256) / 255.0);
  CHECK(parse_error_kind([] { io::parse_cifar_batch({}); }) == ParseErrorKind::empty);
  auto bad = bytes;
  bad.resize(bytes.size() - 10);
  CHECK(parse_error_kind([&] { io::parse_cifar_batch(bad); }) == ParseErrorKind::bad_size);
  const LabeledDataset parts[] = {d, d};
  CHECK(io::concat(parts).size() == 4);
}

TEST_CASE("ARTN round-trips dims, payload bits and tag") {
  TempDir tmp("repscope_artn");
  std::mt19937_64 gen(11);
  for (int t = 0; t < 20; ++t) {
    const auto x = testing::random_relu_tensor(gen, {1 + gen() % 3, 1 + gen() % 4, 1 + gen() % 5, 1 + gen() % 2},
                                               0.4);
    io::write_tensor(x, tmp / "x.artn");
    const auto y = io::read_tensor(tmp / "x.artn");
    CHECK(y.dims() == x.dims());
    CHECK(y.tag() == SourceTag::post_relu);
    CHECK(std::memcmp(y.data().data(), x.data().data(), x.size() * sizeof(double)) == 0);
  }
  SUBCASE("f32 storage rounds through float") {
    const ActTensor4 x({1, 1, 1, 2}, {0.1, 2.0});
    io::write_tensor(x, tmp / "f.artn", io::ArtnDtype::f32);
    CHECK(io::read_artn(tmp / "f.artn").dtype() == io::ArtnDtype::f32);
    const auto y = io::read_tensor(tmp / "f.artn");
    CHECK(y.at(0, 0, 0, 0) == static_cast<double>(0.1f));
    CHECK(y.at(0, 0, 0, 1) == 2.0);
  }
  SUBCASE("corruption") {
    const auto good = io::encode_artn(io::to_artn(ActTensor4({1, 1, 2, 2}, {1, 2, 3, 4})));
    auto bad = good;
    bad[1] = 'X';
    CHECK(parse_error_kind([&] { io::decode_artn(bad); }) == ParseErrorKind::bad_magic);
    bad = good;
    bad.push_back(0);
    CHECK(parse_error_kind([&] { io::decode_artn(bad); }) == ParseErrorKind::length_mismatch);
    bad.assign(good.begin(), good.end() - 8);
    CHECK(parse_error_kind([&] { io::decode_artn(bad); }) == ParseErrorKind::length_mismatch);
    io::ArtnArray three;
    three.dims = {2, 2, 1};
    three.values = std::vector<double>(4, 1.0);
    CHECK(parse_error_kind([&] { io::from_artn(three); }) == ParseErrorKind::bad_size);
  }
}
