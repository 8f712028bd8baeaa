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

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "repscope/common/error.hpp"
#include "repscope/nn/architectures.hpp"
#include "repscope/nn/extract.hpp"
#include "repscope/simd/kernels.hpp"
#include "repscope/sparsity/sparsity.hpp"

using namespace repscope;
using namespace repscope::sparsity;

TEST_CASE("channel sparsity on fixed fixtures") {
  CHECK(channel_sparsity(ActTensor4({2, 3, 2, 2}, std::vector<double>(24, 0.0), SourceTag::post_relu)).values ==
        std::vector<double>(3, 1.0));
  CHECK(channel_sparsity(ActTensor4({2, 3, 2, 2}, std::vector<double>(24, 0.5), SourceTag::post_relu)).values ==
        std::vector<double>(3, 0.0));
  // Channel 0: one zero of four; channel 1: three zeros of four.
  const ActTensor4 t({1, 2, 2, 2}, {0, 1, 2, 3, 0, 0, 5, 0}, SourceTag::post_relu);
  CHECK(channel_sparsity(t, 4).values == std::vector<double>{0.25, 0.75});
  CHECK(channel_sparsity(t, 4).layer_index == 4);
  CHECK(layer_sparsity(t).value == 0.5);
}

TEST_CASE("layer sparsity") {
  CHECK(layer_sparsity(ActTensor4({1, 1, 2, 2}, {0, 0, 0, 0}, SourceTag::post_relu)).value == 1.0);
  CHECK(layer_sparsity(ActTensor4({2, 1, 1, 2}, {0, 1, 2, 0}, SourceTag::post_relu)).value == 0.5);
}

TEST_CASE("raw tensors are rejected") {
  const ActTensor4 raw({1, 1, 1, 2}, {0.0, 1.0});
  CHECK_THROWS_AS(channel_sparsity(raw), InvalidArgument);
  CHECK_THROWS_AS(layer_sparsity(raw), InvalidArgument);
}

TEST_CASE("random tensors: oracle equality and the mean identity, on every backend") {
  const auto original = simd::active().backend;
  for (auto backend : {simd::Backend::scalar, simd::Backend::avx2}) {
    if (!simd::available(backend)) continue;
    simd::select(backend);
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 50; ++trial) {
      const Dims4 d{1 + gen() % 6, 1 + gen() % 9, 1 + gen() % 7, 1 + gen() % 7};
      const auto t = testing::random_relu_tensor(gen, d, (gen() % 100) / 100.0);
      const auto ch = channel_sparsity(t);
      CHECK(ch.values == testing::oracle_channel_sparsity(t));
      const double mean = std::accumulate(ch.values.begin(), ch.values.end(), 0.0) / static_cast<double>(d.c);
      CHECK(std::abs(layer_sparsity(t).value - mean) <= 1e-12);
      CHECK(layer_sparsity(t).value == testing::oracle_layer_sparsity(t));
      for (double v : ch.values) CHECK((v >= 0.0 && v <= 1.0));
    }
  }
  simd::select(original);
}

TEST_CASE("permutation and duplication invariance") {
  std::mt19937_64 gen(8);
  const auto t = testing::random_relu_tensor(gen, {6, 4, 3, 3}, 0.4);
  std::vector<std::size_t> perm(6);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  CHECK(channel_sparsity(t.gather(perm)).values == channel_sparsity(t).values);
  const std::vector<std::size_t> twice = {0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5};
  CHECK(channel_sparsity(t.gather(twice)).values == channel_sparsity(t).values);
  CHECK(layer_sparsity(t.gather(twice)).value == layer_sparsity(t).value);
}

TEST_CASE("optional threshold counts values at or below tau") {
  const ActTensor4 t({1, 1, 1, 4}, {0.0, 0.05, 0.1, 0.5}, SourceTag::post_relu);
  CHECK(layer_sparsity(t).value == 0.25);
  CHECK(layer_sparsity(t, 0, 0.1).value == 0.75);
  CHECK_THROWS_AS(layer_sparsity(t, 0, -1.0), InvalidArgument);
}

TEST_CASE("streaming counter equals the whole-tensor computation") {
  std::mt19937_64 gen(77);
  const auto t = testing::random_relu_tensor(gen, {10, 3, 4, 2}, 0.5);
  SparsityCounter counter(3);
  counter.add(t.data().data(), 4, 8);
  counter.add(t.data().data() + 4 * 24, 6, 8);
  CHECK(counter.channel(1).values == channel_sparsity(t).values);
  CHECK(counter.layer(1).value == layer_sparsity(t).value);
  CHECK(counter.elements_per_channel() == 80);
}

TEST_CASE("sparsity over layers of a network") {
  nn::Network<float> net(nn::build_standard_cnn(true));
  net.init_he_uniform(12);
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> px(40 * 784);
  for (auto& v : px) v = u(gen);
  std::vector<std::uint32_t> labels(40);
  for (std::size_t i = 0; i < 40; ++i) labels[i] = static_cast<std::uint32_t>(i % 10);
  const LabeledDataset data{ActTensor4({40, 1, 28, 28}, px), labels, 10};
  const std::vector<std::size_t> layers = {1, 3, 5};

  const auto a = sparsity_over_layers(net, data, 40, 1, layers, 64);
  const auto b = sparsity_over_layers(net, data, 40, 2, layers, 64);
  const auto c = sparsity_over_layers(net, data, 40, 1, layers, 16);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].hidden_layer == layers[i]);
    // Full coverage: the sampling seed is irrelevant; batch size too.
    CHECK(a[i].channel.values == b[i].channel.values);
    CHECK(a[i].channel.values == c[i].channel.values);
    CHECK(a[i].layer.value == c[i].layer.value);
    // Against extraction + the whole-tensor metric.
    const auto t = nn::extract_representations(net, data.images, nn::hidden_layer_index(net.spec(), layers[i]));
    CHECK(a[i].channel.values == channel_sparsity(t).values);
  }
  CHECK(a[2].channel.values.size() == 100);

  const auto sub1 = sparsity_over_layers(net, data, 10, 5, layers, 4);
  const auto sub2 = sparsity_over_layers(net, data, 10, 5, layers, 7);
  CHECK(sub1[0].channel.values == sub2[0].channel.values);
  CHECK_THROWS(sparsity_over_layers(net, data, 41, 1, layers));
}
