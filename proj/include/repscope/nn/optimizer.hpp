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
#include <span>
#include <vector>

#include "repscope/nn/layers.hpp"

namespace repscope::nn {

template <class T>
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  /// Applies one update with learning rate `lr` using the current gradients.
  /// The parameter list must be the same (same order) on every call.
  virtual void step(std::span<const ParamRef<T>> params, double lr) = 0;
};

/// SGD with Nesterov momentum in the common deep-learning form:
/// v <- mu*v + g;  p <- p - lr*(g + mu*v).
template <class T>
class SgdNesterov final : public Optimizer<T> {
 public:
  explicit SgdNesterov(double momentum) : momentum_(momentum) {}
  void step(std::span<const ParamRef<T>> params, double lr) override;

 private:
  double momentum_;
  std::vector<std::vector<T>> velocity_;
};

/// Adam with bias correction.
template <class T>
class Adam final : public Optimizer<T> {
 public:
  Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8) : beta1_(beta1), beta2_(beta2), eps_(eps) {}
  void step(std::span<const ParamRef<T>> params, double lr) override;

 private:
  double beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

}  // namespace repscope::nn
