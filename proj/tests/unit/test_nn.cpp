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

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/nn/architectures.hpp"
#include "repscope/nn/batchnorm.hpp"
#include "repscope/nn/checkpoint.hpp"
#include "repscope/nn/extract.hpp"
#include "repscope/nn/network.hpp"
#include "repscope/nn/optimizer.hpp"
#include "repscope/nn/train.hpp"

using namespace repscope;
using namespace repscope::nn;
using repscope::testing::rel_error;

namespace {

template <class Fn>
double central_difference(double& slot, double h, Fn&& f) {
  const double keep = slot;
  slot = keep + h;
  const double up = f();
  slot = keep - h;
  const double down = f();
  slot = keep;
  return (up - down) / (2.0 * h);
}

/// Max relative error between analytic and central-difference gradients of
/// softmax cross-entropy over every parameter of `net`.
double gradcheck(Network<double>& net, const Blob<double>& input, const std::vector<std::uint32_t>& labels) {
  auto loss = [&] { return softmax_cross_entropy(net.forward(input, Mode::train), labels); };
  net.zero_grad();
  Blob<double> grad;
  softmax_cross_entropy(net.forward(input, Mode::train), labels, &grad);
  net.backward(grad);
  double worst = 0.0;
  for (const auto& p : net.params())
    for (std::size_t i = 0; i < p.value->size(); ++i)
      worst = std::max(worst, rel_error((*p.grad)[i], central_difference((*p.value)[i], 1e-5, loss), 1e-6));
  return worst;
}

NetworkSpec tiny_conv_spec(bool bn) {
  NetworkSpec s;
  s.name = "tiny";
  s.input = {1, 6, 6, false};
  s.classes = 3;
  s.layers.push_back(LayerSpec::conv2d(1, 2, 3, 1, 0));
  if (bn) s.layers.push_back(LayerSpec::batchnorm(2));
  s.layers.push_back(LayerSpec::relu());
  s.layers.push_back(LayerSpec::maxpool2d(2, 2));
  s.layers.push_back(LayerSpec::flatten());
  s.layers.push_back(LayerSpec::dense(8, 5));
  if (bn) s.layers.push_back(LayerSpec::batchnorm(5));
  s.layers.push_back(LayerSpec::relu());
  s.layers.push_back(LayerSpec::dense(5, 3));
  s.shapes();
  return s;
}

NetworkSpec dense_spec(std::size_t in, std::size_t hidden, std::size_t classes) {
  NetworkSpec s;
  s.name = "mlp";
  s.input = {in, 1, 1, false};
  s.classes = classes;
  s.layers = {LayerSpec::flatten(), LayerSpec::dense(in, hidden), LayerSpec::relu(),
              LayerSpec::dense(hidden, classes)};
  s.shapes();
  return s;
}

LabeledDataset two_blob_dataset(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 0.3);
  std::vector<double> x(n * 4);
  std::vector<std::uint32_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<std::uint32_t>(i % 2);
    for (std::size_t d = 0; d < 4; ++d) x[i * 4 + d] = (y[i] ? 1.5 : -1.5) * (d < 2 ? 1.0 : 0.0) + normal(gen);
  }
  return {ActTensor4({n, 4, 1, 1}, std::move(x)), std::move(y), 2};
}

}  // namespace

TEST_CASE("BatchNorm forward on hand-computed and degenerate inputs") {
  SUBCASE("x = [1, 3], gamma 2, beta 1") {
    Blob<double> x({2, 1, 1, 1});
    x.data = {1.0, 3.0};
    BatchNormState<double> st(1);
    st.gamma = {2.0};
    st.beta = {1.0};
    st.eps = 0.0;
    Blob<double> y;
    batchnorm_forward(x, y, st);
    CHECK(y.data[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(y.data[1] == doctest::Approx(3.0).epsilon(1e-12));
    // Running stats: momentum 0.1 toward batch mean 2 and unbiased variance 2.
    CHECK(st.running_mean[0] == doctest::Approx(0.2));
    CHECK(st.running_var[0] == doctest::Approx(0.9 + 0.1 * 2.0));
  }
  SUBCASE("standardized input is reproduced up to the eps scaling") {
    Blob<double> x({4, 2});
    x.data = {-1, 1, 1, -1, -1, -1, 1, 1};  // each column: mean 0, biased var 1
    BatchNormState<double> st(2);
    Blob<double> y;
    batchnorm_forward(x, y, st);
    for (std::size_t i = 0; i < 8; ++i) CHECK(y.data[i] == doctest::Approx(x.data[i] / std::sqrt(1.0 + 1e-5)));
  }
  SUBCASE("gamma 0 yields beta everywhere") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n;
    Blob<double> x({5, 3, 2, 2});
    for (auto& v : x.data) v = n(gen);
    BatchNormState<double> st(3);
    st.gamma = {0, 0, 0};
    st.beta = {0.5, -1, 2};
    Blob<double> y;
    batchnorm_forward(x, y, st);
    for (std::size_t s = 0; s < 5; ++s)
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < 4; ++i) CHECK(y.data[(s * 3 + c) * 4 + i] == st.beta[c]);
  }
  SUBCASE("eval mode uses the running statistics") {
    Blob<double> x({2, 1});
    x.data = {4.0, 6.0};
    BatchNormState<double> st(1);
    st.running_mean = {1.0};
    st.running_var = {4.0};
    st.mode = Mode::eval;
    Blob<double> y;
    batchnorm_forward(x, y, st);
    CHECK(y.data[0] == doctest::Approx(3.0 / std::sqrt(4.0 + 1e-5)));
    CHECK(st.running_mean[0] == 1.0);
  }
}

TEST_CASE("BatchNorm backward matches finite differences and its identities") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> n;
  Blob<double> x({4, 3, 2, 2});
  for (auto& v : x.data) v = 2.0 * n(gen) + 1.0;
  BatchNormState<double> st(3);
  for (std::size_t c = 0; c < 3; ++c) {
    st.gamma[c] = 0.5 + 0.4 * c;
    st.beta[c] = 0.1 * c;
  }
  std::vector<double> w(x.size());
  for (auto& v : w) v = n(gen);
  // Scalar objective: sum(w * y).
  auto objective = [&] {
    BatchNormState<double> s = st;
    Blob<double> y;
    batchnorm_forward(x, y, s);
    return std::inner_product(w.begin(), w.end(), y.data.begin(), 0.0);
  };
  BatchNormState<double> s = st;
  BatchNormCache<double> cache;
  Blob<double> y;
  batchnorm_forward(x, y, s, &cache);
  Blob<double> gy(x.shape);
  gy.data = w;
  const auto g = batchnorm_backward(gy, cache, st);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    worst = std::max(worst, rel_error(g.grad_in.data[i], central_difference(x.data[i], 1e-5, objective), 1e-7));
  for (std::size_t c = 0; c < 3; ++c) {
    worst = std::max(worst, rel_error(g.grad_gamma[c], central_difference(st.gamma[c], 1e-5, objective), 1e-7));
    worst = std::max(worst, rel_error(g.grad_beta[c], central_difference(st.beta[c], 1e-5, objective), 1e-7));
    double sum = 0.0;
    for (std::size_t sm = 0; sm < 4; ++sm)
      for (std::size_t i = 0; i < 4; ++i) sum += w[(sm * 3 + c) * 4 + i];
    CHECK(g.grad_beta[c] == doctest::Approx(sum).epsilon(1e-12));
  }
  CHECK(worst < 1e-4);

  SUBCASE("constant upstream gradient is annihilated by the mean subtraction") {
    BatchNormState<double> unit(3);
    BatchNormCache<double> c2;
    Blob<double> y2;
    batchnorm_forward(x, y2, unit, &c2);
    Blob<double> ones(x.shape);
    std::fill(ones.data.begin(), ones.data.end(), 1.0);
    const auto g2 = batchnorm_backward(ones, c2, unit);
    for (std::size_t c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (std::size_t sm = 0; sm < 4; ++sm)
        for (std::size_t i = 0; i < 4; ++i) sum += g2.grad_in.data[(sm * 3 + c) * 4 + i];
      CHECK(std::abs(sum) < 1e-10);
    }
  }
}

TEST_CASE("convolution matches a quadruple-loop oracle") {
  NetworkSpec s;
  s.name = "conv";
  s.input = {1, 5, 5, false};
  s.classes = 9;
  s.layers = {LayerSpec::conv2d(1, 1, 3, 1, 0), LayerSpec::flatten()};
  s.shapes();
  Network<double> net(s);
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n;
  auto& conv = dynamic_cast<Conv2d<double>&>(net.layer(0));
  for (auto& v : conv.weight) v = n(gen);
  conv.bias = {0.25};
  Blob<double> x({1, 1, 5, 5});
  for (auto& v : x.data) v = n(gen);
  const auto& y = net.forward(x, Mode::eval);
  REQUIRE(y.size() == 9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double want = 0.25;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) want += conv.weight[a * 3 + b] * x.data[(i + a) * 5 + (j + b)];
      CHECK(std::abs(y.data[i * 3 + j] - want) <= 1e-12);
    }

  SUBCASE("padding and stride against the oracle") {
    Conv2d<double> c(LayerSpec::conv2d(2, 3, 3, 2, 1));
    for (auto& v : c.weight) v = n(gen);
    for (auto& v : c.bias) v = n(gen);
    Blob<double> in({2, 2, 5, 4}), out;
    for (auto& v : in.data) v = n(gen);
    c.forward(in, out, Mode::eval);
    REQUIRE(out.shape == std::vector<std::size_t>{2, 3, 3, 2});
    for (std::size_t sm = 0; sm < 2; ++sm)
      for (std::size_t co = 0; co < 3; ++co)
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 2; ++j) {
            double want = c.bias[co];
            for (std::size_t ci = 0; ci < 2; ++ci)
              for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) {
                  const long r = static_cast<long>(i * 2 + a) - 1, q = static_cast<long>(j * 2 + b) - 1;
                  if (r < 0 || q < 0 || r >= 5 || q >= 4) continue;
                  want += c.weight[((co * 2 + ci) * 3 + a) * 3 + b] * in.data[((sm * 2 + ci) * 5 + r) * 4 + q];
                }
            CHECK(std::abs(out.data[((sm * 3 + co) * 3 + i) * 2 + j] - want) <= 1e-12);
          }
  }
}

TEST_CASE("1x1 identity convolution passes channels through") {
  Conv2d<float> c(LayerSpec::conv2d(3, 3, 1));
  std::fill(c.weight.begin(), c.weight.end(), 0.0f);
  for (std::size_t i = 0; i < 3; ++i) c.weight[i * 3 + i] = 1.0f;
  Blob<float> in({2, 3, 4, 4}), out;
  std::iota(in.data.begin(), in.data.end(), 0.0f);
  c.forward(in, out, Mode::eval);
  CHECK(out.data == in.data);
}

TEST_CASE("gradients of a tiny network match central differences") {
  for (bool bn : {true, false}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      Network<double> net(tiny_conv_spec(bn));
      net.init_he_uniform(seed);
      std::mt19937_64 gen(100 + seed);
      std::normal_distribution<double> n;
      Blob<double> x({8, 1, 6, 6});
      for (auto& v : x.data) v = n(gen);
      std::vector<std::uint32_t> labels(8);
      for (auto& l : labels) l = static_cast<std::uint32_t>(gen() % 3);
      CAPTURE(bn);
      CAPTURE(seed);
      CHECK(gradcheck(net, x, labels) < 1e-4);
    }
  }
}

TEST_CASE("saturated correct predictions give zero gradients") {
  Blob<double> logits({2, 3});
  logits.data = {2000, 0, 0, 0, 0, 2000};
  Blob<double> grad;
  std::size_t correct = 0;
  const std::vector<std::uint32_t> labels = {0, 2};
  const double loss = softmax_cross_entropy(logits, labels, &grad, &correct);
  CHECK(loss == 0.0);
  CHECK(correct == 2);
  for (double g : grad.data) CHECK(g == 0.0);
}

TEST_CASE("softmax cross-entropy against a direct formula") {
  Blob<double> logits({2, 3});
  logits.data = {1.0, 2.0, 0.5, -1.0, 0.0, 3.0};
  const std::vector<std::uint32_t> labels = {1, 0};
  Blob<double> grad;
  const double loss = softmax_cross_entropy(logits, labels, &grad);
  auto lse = [](double a, double b, double c) { return std::log(std::exp(a) + std::exp(b) + std::exp(c)); };
  const double want = 0.5 * ((lse(1, 2, 0.5) - 2.0) + (lse(-1, 0, 3) + 1.0));
  CHECK(loss == doctest::Approx(want).epsilon(1e-12));
  CHECK(grad.data[1] == doctest::Approx((std::exp(2.0 - lse(1, 2, 0.5)) - 1.0) / 2.0));
}

TEST_CASE("one small SGD step decreases the loss on a fixed batch") {
  Network<double> net(tiny_conv_spec(true));
  net.init_he_uniform(9);
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n;
  Blob<double> x({8, 1, 6, 6});
  for (auto& v : x.data) v = n(gen);
  std::vector<std::uint32_t> labels = {0, 1, 2, 0, 1, 2, 0, 1};
  Blob<double> grad;
  net.zero_grad();
  const double before = softmax_cross_entropy(net.forward(x, Mode::train), labels, &grad);
  net.backward(grad);
  SgdNesterov<double> opt(0.9);
  auto params = net.params();
  opt.step(params, 1e-3);
  const double after = softmax_cross_entropy(net.forward(x, Mode::train), labels);
  CHECK(after < before);
}

TEST_CASE("optimizer update rules") {
  std::vector<double> w = {1.0}, g = {0.5};
  const std::vector<ParamRef<double>> p = {{"w", {1}, &w, &g}};
  SUBCASE("Nesterov: v = mu v + g; w -= lr (g + mu v)") {
    SgdNesterov<double> opt(0.9);
    opt.step(p, 0.1);
    CHECK(w[0] == doctest::Approx(1.0 - 0.1 * (0.5 + 0.9 * 0.5)));
    opt.step(p, 0.1);
    const double v2 = 0.9 * 0.5 + 0.5;
    CHECK(w[0] == doctest::Approx(1.0 - 0.1 * (0.5 + 0.9 * 0.5) - 0.1 * (0.5 + 0.9 * v2)));
  }
  SUBCASE("Adam: first step moves by lr") {
    Adam<double> opt;
    opt.step(p, 0.01);
    CHECK(w[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-6));
  }
}

TEST_CASE("architectures") {
  SUBCASE("standard CNN: 4 conv, 2 pools, dense(100), output(10)") {
    for (bool bn : {true, false}) {
      const auto s = build_standard_cnn(bn);
      std::size_t conv = 0, pool = 0, dense = 0, norm = 0;
      for (const auto& l : s.layers) {
        conv += l.kind == LayerKind::conv2d;
        pool += l.kind == LayerKind::maxpool2d;
        dense += l.kind == LayerKind::dense;
        norm += l.kind == LayerKind::batchnorm;
      }
      CHECK(conv == 4);
      CHECK(pool == 2);
      CHECK(dense == 2);
      CHECK(norm == (bn ? 5 : 0));
      CHECK(s.has_batchnorm() == bn);
      CHECK(hidden_layer_count(s) == 5);
      CHECK(s.layers.back().out_features == 10);
      CHECK(s.layers[hidden_layer_index(s, 5) - (bn ? 2 : 1)].out_features == 100);
    }
    Network<float> net(build_standard_cnn(true));
    net.init_he_uniform(1);
    Blob<float> x({2, 1, 28, 28});
    CHECK(net.forward(x, Mode::eval).shape == std::vector<std::size_t>{2, 10});
  }
  SUBCASE("VGG-16 channel sequence") {
    for (bool bn : {true, false}) {
      const auto s = build_vgg16(bn);
      std::vector<std::size_t> ch;
      for (const auto& l : s.layers)
        if (l.kind == LayerKind::conv2d) ch.push_back(l.out_channels);
      CHECK(ch == std::vector<std::size_t>(std::begin(kVgg16Channels), std::end(kVgg16Channels)));
      CHECK(s.has_batchnorm() == bn);
      CHECK(s.shapes().back() == ActShape{10, 1, 1, true});
    }
  }
  SUBCASE("layer specs are validated") {
    NetworkSpec s = dense_spec(4, 3, 2);
    s.layers[1].in_features = 5;
    CHECK_THROWS_AS(s.shapes(), ShapeError);
  }
}

TEST_CASE("extraction") {
  Network<float> net(build_standard_cnn(true));
  net.init_he_uniform(4);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> px(3 * 28 * 28);
  for (auto& v : px) v = u(gen);
  const ActTensor4 images({3, 1, 28, 28}, px);

  SUBCASE("post-ReLU range and tag") {
    for (std::size_t h = 1; h <= 5; ++h) {
      const auto t = extract_representations(net, images, hidden_layer_index(net.spec(), h), 2);
      CHECK(t.tag() == SourceTag::post_relu);
      CHECK(*std::min_element(t.data().begin(), t.data().end()) >= 0.0);
    }
    const auto dense = extract_representations(net, images, hidden_layer_index(net.spec(), 5));
    CHECK(dense.dims() == Dims4{3, 100, 1, 1});
    CHECK_THROWS(extract_representations(net, images, 0));
  }
  SUBCASE("equals composing forward through the layer") {
    const std::size_t li = hidden_layer_index(net.spec(), 2);
    const auto t = extract_representations(net, images, li, 2);
    Blob<float> x({2, 1, 28, 28});
    for (std::size_t i = 0; i < x.size(); ++i) x.data[i] = static_cast<float>(px[i]);
    const auto& a = net.forward(x, Mode::eval, li);
    REQUIRE(a.size() == 2 * t.dims().per_sample());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(t.data()[i] == static_cast<double>(a.data[i]));
  }
  SUBCASE("dead first layer") {
    auto& conv = dynamic_cast<Conv2d<float>&>(net.layer(0));
    std::fill(conv.weight.begin(), conv.weight.end(), 0.0f);
    std::fill(conv.bias.begin(), conv.bias.end(), -1.0f);
    Network<float> plain(build_standard_cnn(false));
    auto& c0 = dynamic_cast<Conv2d<float>&>(plain.layer(0));
    std::fill(c0.weight.begin(), c0.weight.end(), 0.0f);
    std::fill(c0.bias.begin(), c0.bias.end(), -1.0f);
    const auto t = extract_representations(plain, images, hidden_layer_index(plain.spec(), 1));
    for (double v : t.data()) CHECK(v == 0.0);
  }
}

TEST_CASE("training a tiny dense net interpolates separable blobs") {
  const auto data = two_blob_dataset(64, 1);
  TrainConfig cfg;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.01;
  cfg.nesterov_momentum = 0.9;
  cfg.max_epochs = 50;
  cfg.seed = 3;
  std::size_t callbacks = 0;
  const auto m = train(dense_spec(4, 8, 2), data, nullptr, cfg, [&](const EpochRecord&) { ++callbacks; });
  CHECK(m.history.stop_reason == "interpolation");
  CHECK(m.train_accuracy == 1.0);
  CHECK(callbacks == m.history.epochs.size());
  CHECK(m.history.epochs.size() <= 50);

  SUBCASE("same seed gives bit-identical results") {
    const auto again = train(dense_spec(4, 8, 2), data, nullptr, cfg);
    REQUIRE(again.history.epochs.size() == m.history.epochs.size());
    for (std::size_t i = 0; i < m.history.epochs.size(); ++i)
      CHECK(again.history.epochs[i].train_loss == m.history.epochs[i].train_loss);
    auto p1 = const_cast<Network<float>&>(m.network).params();
    auto p2 = const_cast<Network<float>&>(again.network).params();
    for (std::size_t i = 0; i < p1.size(); ++i) CHECK(*p1[i].value == *p2[i].value);
  }
  SUBCASE("learning-rate decay schedule") {
    TrainConfig c2 = cfg;
    c2.stop_rule = StopRule::early_stopping;
    c2.max_epochs = 5;
    c2.lr_decay_every_n_epochs = 2;
    c2.lr_decay_factor = 0.5;
    const auto v = two_blob_dataset(16, 2);
    const auto r = train(dense_spec(4, 8, 2), data, &v, c2);
    REQUIRE(r.history.epochs.size() >= 3);
    CHECK(r.history.epochs[0].learning_rate == doctest::Approx(0.01));
    CHECK(r.history.epochs[1].learning_rate == doctest::Approx(0.01));
    CHECK(r.history.epochs[2].learning_rate == doctest::Approx(0.005));
  }
}

TEST_CASE("divergence is reported with its epoch") {
  const auto data = two_blob_dataset(32, 5);
  TrainConfig cfg;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e6;
  cfg.nesterov_momentum = 0.99;
  cfg.max_epochs = 20;
  try {
    train(dense_spec(4, 8, 2), data, nullptr, cfg);
    FAIL("training with lr 1e6 should diverge");
  } catch (const DivergenceError& e) {
    CHECK(e.epoch() >= 1);
    CHECK(e.epoch() <= 20);
  }
}

TEST_CASE("TrainConfig JSON is strict and round-trips") {
  TrainConfig c;
  c.max_epochs = 12;
  c.optimizer = OptimizerKind::adam;
  nlohmann::json j = c;
  CHECK(j.get<TrainConfig>() == c);
  j["momentum"] = 0.5;
  CHECK_THROWS_AS(j.get<TrainConfig>(), ConfigError);
  TrainConfig bad;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  TrainConfig p;
  p.max_epochs = 200;
  p.patience_fraction = 0.2;
  CHECK(p.patience_epochs() == 40);
}

TEST_CASE("checkpoints restore weights, running statistics and history") {
  repscope::testing::TempDir tmp("repscope_ckpt");
  const auto data = two_blob_dataset(32, 8);
  NetworkSpec spec = dense_spec(4, 6, 2);
  spec.layers.insert(spec.layers.begin() + 2, LayerSpec::batchnorm(6));
  spec.shapes();
  TrainConfig cfg;
  cfg.batch_size = 8;
  cfg.nesterov_momentum = 0.9;
  cfg.max_epochs = 3;
  auto m = train(spec, data, nullptr, cfg);
  save_checkpoint(m, tmp.path(), {{"tag", "x"}});
  auto back = load_checkpoint(tmp.path());
  CHECK(back.spec == m.spec);
  CHECK(back.config == m.config);
  CHECK(back.history.epochs.size() == m.history.epochs.size());
  CHECK(checkpoint_extra(tmp.path())["tag"] == "x");
  auto a = m.network.params(), b = back.network.params();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i].value == *b[i].value);
  auto ba = m.network.buffers(), bb = back.network.buffers();
  REQUIRE(ba.size() == bb.size());
  for (std::size_t i = 0; i < ba.size(); ++i) CHECK(*ba[i].value == *bb[i].value);
  CHECK(evaluate(back.network, data).accuracy == evaluate(m.network, data).accuracy);
  std::filesystem::remove(tmp / "manifest.json");
  CHECK_THROWS_AS(load_checkpoint(tmp.path()), DataError);
}
