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

#include <cstddef>
#include <vector>

#include "repscope/nn/blob.hpp"

namespace repscope::nn {

enum class Mode { train, eval };

/// Learned affine parameters and running statistics of one BatchNorm layer.
///
/// Feature axis is 1: channels of an (N, C, H, W) blob or units of (N, D).
/// Train mode normalizes with the biased batch variance and folds the
/// unbiased variance into running_var; eval mode uses the running values.
template <class T>
struct BatchNormState {
  std::vector<T> gamma;
  std::vector<T> beta;
  std::vector<T> running_mean;
  std::vector<T> running_var;
  double eps = 1e-5;
  double momentum = 0.1;
  Mode mode = Mode::train;

  explicit BatchNormState(std::size_t features = 0)
      : gamma(features, T(1)), beta(features, T(0)), running_mean(features, T(0)), running_var(features, T(1)) {}

  std::size_t features() const noexcept { return gamma.size(); }
  void validate() const;
};

/// Values saved by the forward pass for the backward pass.
template <class T>
struct BatchNormCache {
  std::vector<std::size_t> shape;
  std::vector<T> xhat;     // normalized input, same layout as x
  std::vector<T> inv_std;  // per feature
  Mode mode = Mode::train;
  bool valid = false;
};

template <class T>
struct BatchNormGrads {
  Blob<T> grad_in;
  std::vector<T> grad_gamma;
  std::vector<T> grad_beta;
};

/// y = gamma * (x - mean) / sqrt(var + eps) + beta per feature. Throws on a
/// feature-count mismatch or a train-mode batch with fewer than two samples.
template <class T>
void batchnorm_forward(const Blob<T>& x, Blob<T>& y, BatchNormState<T>& state, BatchNormCache<T>* cache = nullptr);

/// Exact gradient of batchnorm_forward through the batch statistics (train
/// mode) or through the fixed running statistics (eval mode). Throws if the
/// cache is missing or was produced for a differently shaped batch.
template <class T>
BatchNormGrads<T> batchnorm_backward(const Blob<T>& grad_out, const BatchNormCache<T>& cache,
                                     const BatchNormState<T>& state);

}  // namespace repscope::nn
