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

#include "repscope/nn/network.hpp"

#include <algorithm>
#include <cmath>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"

namespace repscope::nn {

template <class T>
double softmax_cross_entropy(const Blob<T>& logits, std::span<const std::uint32_t> labels, Blob<T>* grad,
                             std::size_t* correct) {
  if (logits.shape.size() != 2) throw ShapeError("softmax_cross_entropy: logits must be (N, K)");
  const std::size_t n = logits.shape[0], k = logits.shape[1];
  if (labels.size() != n) throw ShapeError("softmax_cross_entropy: label count differs from batch size");
  if (n == 0) throw InvalidArgument("softmax_cross_entropy: empty batch");
  if (grad) grad->resize(logits.shape);
  double total = 0.0;
  std::size_t hits = 0;
  std::vector<double> p(k);
  for (std::size_t i = 0; i < n; ++i) {
    const T* z = logits.data.data() + i * k;
    if (labels[i] >= k) throw InvalidArgument("softmax_cross_entropy: label out of range");
    const std::size_t arg = static_cast<std::size_t>(std::max_element(z, z + k) - z);
    if (arg == labels[i]) ++hits;
    const double zmax = z[arg];
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      p[j] = std::exp(static_cast<double>(z[j]) - zmax);
      sum += p[j];
    }
    const double log_sum = std::log(sum);
    total += log_sum - (static_cast<double>(z[labels[i]]) - zmax);
    if (grad) {
      T* g = grad->data.data() + i * k;
      for (std::size_t j = 0; j < k; ++j) {
        const double pj = p[j] / sum - (j == labels[i] ? 1.0 : 0.0);
        g[j] = static_cast<T>(pj / static_cast<double>(n));
      }
    }
  }
  if (correct) *correct = hits;
  return total / static_cast<double>(n);
}

template <class T>
Network<T>::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.shapes();
  layers_.reserve(spec_.layers.size());
  for (const auto& l : spec_.layers) layers_.push_back(make_layer<T>(l));
  acts_.resize(layers_.size());
}

template <class T>
const Blob<T>& Network<T>::forward(const Blob<T>& input, Mode mode, std::size_t last) {
  if (layers_.empty()) throw InvalidArgument("Network::forward: empty network");
  if (last == kAll) last = layers_.size() - 1;
  if (last >= layers_.size()) throw InvalidArgument("Network::forward: layer index out of range");
  const auto& in = spec_.input;
  if (input.shape.size() != 4 || input.shape[1] != in.c || input.shape[2] != in.h || input.shape[3] != in.w)
    throw ShapeError("Network::forward: input " + shape_string(input.shape) + " does not match (N," +
                     std::to_string(in.c) + "," + std::to_string(in.h) + "," + std::to_string(in.w) + ")");
  if (input.shape[0] == 0) throw ShapeError("Network::forward: empty batch");
  input_.shape = input.shape;
  input_.data.assign(input.data.begin(), input.data.end());
  const Blob<T>* cur = &input_;
  for (std::size_t i = 0; i <= last; ++i) {
    layers_[i]->forward(*cur, acts_[i], mode);
    cur = &acts_[i];
  }
  forwarded_ = last + 1;
  return *cur;
}

template <class T>
void Network<T>::backward(const Blob<T>& grad_logits) {
  if (forwarded_ != layers_.size()) throw InvalidArgument("Network::backward: needs a full forward pass first");
  if (grad_logits.shape != acts_.back().shape) throw ShapeError("Network::backward: gradient shape mismatch");
  const Blob<T>* g_out = &grad_logits;
  Blob<T>* bufs[2] = {&grad_a_, &grad_b_};
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Blob<T>& in = i == 0 ? input_ : acts_[i - 1];
    Blob<T>* g_in = i == 0 ? nullptr : bufs[i % 2];
    layers_[i]->backward(in, acts_[i], *g_out, g_in);
    g_out = g_in;
  }
}

template <class T>
std::vector<ParamRef<T>> Network<T>::params() {
  std::vector<ParamRef<T>> out;
  for (auto& l : layers_)
    for (auto& p : l->params()) out.push_back(p);
  return out;
}

template <class T>
std::vector<ParamRef<T>> Network<T>::buffers() {
  std::vector<ParamRef<T>> out;
  for (auto& l : layers_)
    for (auto& p : l->buffers()) out.push_back(p);
  return out;
}

template <class T>
void Network<T>::zero_grad() {
  for (auto& p : params()) std::fill(p.grad->begin(), p.grad->end(), T(0));
}

template <class T>
void Network<T>::init_he_uniform(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "init"));
  for (auto& l : layers_) {
    std::vector<T>* w = nullptr;
    std::vector<T>* b = nullptr;
    std::size_t fan_in = 0;
    if (auto* c = dynamic_cast<Conv2d<T>*>(l.get())) {
      w = &c->weight;
      b = &c->bias;
      fan_in = c->spec().in_channels * c->spec().kernel * c->spec().kernel;
    } else if (auto* d = dynamic_cast<Dense<T>*>(l.get())) {
      w = &d->weight;
      b = &d->bias;
      fan_in = d->spec().in_features;
    } else if (auto* bn = dynamic_cast<BatchNorm<T>*>(l.get())) {
      bn->state = BatchNormState<T>(bn->state.features());
      continue;
    } else {
      continue;
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (auto& v : *w) v = static_cast<T>(rng.uniform(-bound, bound));
    std::fill(b->begin(), b->end(), T(0));
  }
  zero_grad();
}

template double softmax_cross_entropy<float>(const Blob<float>&, std::span<const std::uint32_t>, Blob<float>*,
                                             std::size_t*);
template double softmax_cross_entropy<double>(const Blob<double>&, std::span<const std::uint32_t>, Blob<double>*,
                                              std::size_t*);
template class Network<float>;
template class Network<double>;

}  // namespace repscope::nn
