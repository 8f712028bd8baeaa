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

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "repscope/nn/layers.hpp"

namespace repscope::nn {

/// Mean softmax cross-entropy of `logits` (N, K) against `labels`. When
/// `grad` is non-null it receives d(loss)/d(logits). `correct` (optional)
/// receives the number of argmax hits.
template <class T>
double softmax_cross_entropy(const Blob<T>& logits, std::span<const std::uint32_t> labels, Blob<T>* grad = nullptr,
                             std::size_t* correct = nullptr);

/// A NetworkSpec instantiated with parameters and per-layer activation
/// buffers. Not thread-safe: forward passes reuse internal buffers.
template <class T>
class Network {
 public:
  static constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();

  explicit Network(NetworkSpec spec);

  const NetworkSpec& spec() const noexcept { return spec_; }
  std::size_t layer_count() const noexcept { return layers_.size(); }
  Layer<T>& layer(std::size_t i) { return *layers_.at(i); }

  /// Runs layers 0..last (inclusive; kAll = every layer) on `input`
  /// (N, C, H, W) and returns the output of `last`. Every intermediate
  /// output stays available through activation().
  const Blob<T>& forward(const Blob<T>& input, Mode mode, std::size_t last = kAll);

  /// Output of layer i from the most recent forward call.
  const Blob<T>& activation(std::size_t i) const { return acts_.at(i); }

  /// Back-propagates d(loss)/d(logits) through a full forward pass made in
  /// the same call sequence, accumulating into every parameter gradient.
  void backward(const Blob<T>& grad_logits);

  std::vector<ParamRef<T>> params();
  std::vector<ParamRef<T>> buffers();
  void zero_grad();

  /// Fan-in scaled uniform (He) weights in [-sqrt(6/fan_in), sqrt(6/fan_in)],
  /// zero biases, BatchNorm reset to gamma=1, beta=0 and unit running stats.
  void init_he_uniform(std::uint64_t seed);

 private:
  NetworkSpec spec_;
  std::vector<std::unique_ptr<Layer<T>>> layers_;
  Blob<T> input_;
  std::vector<Blob<T>> acts_;
  std::size_t forwarded_ = 0;  // number of layers run by the last forward
  Blob<T> grad_a_, grad_b_;
};

}  // namespace repscope::nn
