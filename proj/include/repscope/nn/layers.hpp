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
#include <memory>
#include <string>
#include <vector>

#include "repscope/nn/batchnorm.hpp"
#include "repscope/nn/blob.hpp"
#include "repscope/nn/layer_spec.hpp"

namespace repscope::nn {

/// Named view of one trainable tensor and its gradient (grad is null for
/// non-trainable buffers such as running statistics).
template <class T>
struct ParamRef {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<T>* value = nullptr;
  std::vector<T>* grad = nullptr;
};

template <class T>
class Layer {
 public:
  virtual ~Layer() = default;

  const LayerSpec& spec() const noexcept { return spec_; }

  virtual void forward(const Blob<T>& in, Blob<T>& out, Mode mode) = 0;

  /// `in`/`out` are the tensors of the matching forward call. grad_in may
  /// be null when the input gradient is not needed (first layer).
  virtual void backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) = 0;

  virtual std::vector<ParamRef<T>> params() { return {}; }
  virtual std::vector<ParamRef<T>> buffers() { return {}; }

 protected:
  explicit Layer(LayerSpec spec) : spec_(spec) {}

 private:
  LayerSpec spec_;
};

/// Direct correlation via im2col + GEMM. Weights are (out, in*k*k).
template <class T>
class Conv2d final : public Layer<T> {
 public:
  explicit Conv2d(const LayerSpec& spec);

  void forward(const Blob<T>& in, Blob<T>& out, Mode mode) override;
  void backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) override;
  std::vector<ParamRef<T>> params() override;

  std::vector<T> weight, bias, weight_grad, bias_grad;

 private:
  std::size_t patch() const noexcept;
  std::vector<T> cols_;  // per-sample im2col buffers from the last train forward
  std::vector<T> scratch_;
};

template <class T>
class Dense final : public Layer<T> {
 public:
  explicit Dense(const LayerSpec& spec);

  void forward(const Blob<T>& in, Blob<T>& out, Mode mode) override;
  void backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) override;
  std::vector<ParamRef<T>> params() override;

  std::vector<T> weight, bias, weight_grad, bias_grad;  // weight is (out, in)

 private:
  std::vector<T> transposed_;
};

template <class T>
class Relu final : public Layer<T> {
 public:
  explicit Relu(const LayerSpec& spec) : Layer<T>(spec) {}
  void forward(const Blob<T>& in, Blob<T>& out, Mode mode) override;
  void backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) override;
};

/// Max pooling without padding; the first maximum in scan order wins ties.
template <class T>
class MaxPool2d final : public Layer<T> {
 public:
  explicit MaxPool2d(const LayerSpec& spec) : Layer<T>(spec) {}
  void forward(const Blob<T>& in, Blob<T>& out, Mode mode) override;
  void backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) override;

 private:
  std::vector<std::uint32_t> argmax_;
};

template <class T>
class Flatten final : public Layer<T> {
 public:
  explicit Flatten(const LayerSpec& spec) : Layer<T>(spec) {}
  void forward(const Blob<T>& in, Blob<T>& out, Mode mode) override;
  void backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) override;
};

template <class T>
class BatchNorm final : public Layer<T> {
 public:
  explicit BatchNorm(const LayerSpec& spec) : Layer<T>(spec), state(spec.features) {}
  void forward(const Blob<T>& in, Blob<T>& out, Mode mode) override;
  void backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) override;
  std::vector<ParamRef<T>> params() override;
  std::vector<ParamRef<T>> buffers() override;

  BatchNormState<T> state;
  std::vector<T> gamma_grad, beta_grad;

 private:
  BatchNormCache<T> cache_;
};

template <class T>
std::unique_ptr<Layer<T>> make_layer(const LayerSpec& spec);

}  // namespace repscope::nn
