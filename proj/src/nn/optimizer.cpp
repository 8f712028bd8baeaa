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

#include "repscope/nn/optimizer.hpp"

#include <cmath>

#include "repscope/common/error.hpp"

namespace repscope::nn {
namespace {

template <class T>
void ensure_slots(std::vector<std::vector<T>>& slots, std::span<const ParamRef<T>> params) {
  if (slots.empty()) {
    slots.reserve(params.size());
    for (const auto& p : params) slots.emplace_back(p.value->size(), T(0));
  }
  if (slots.size() != params.size()) throw InvalidArgument("optimizer: parameter list changed between steps");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (slots[i].size() != params[i].value->size())
      throw InvalidArgument("optimizer: parameter '" + params[i].name + "' changed size");
}

}  // namespace

template <class T>
void SgdNesterov<T>::step(std::span<const ParamRef<T>> params, double lr) {
  ensure_slots(velocity_, params);
  const T mu = static_cast<T>(momentum_);
  const T eta = static_cast<T>(lr);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& v = velocity_[i];
    auto& p = *params[i].value;
    const auto& g = *params[i].grad;
    for (std::size_t j = 0; j < p.size(); ++j) {
      v[j] = mu * v[j] + g[j];
      p[j] -= eta * (g[j] + mu * v[j]);
    }
  }
}

template <class T>
void Adam<T>::step(std::span<const ParamRef<T>> params, double lr) {
  ensure_slots(m_, params);
  ensure_slots(v_, params);
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& m = m_[i];
    auto& v = v_[i];
    auto& p = *params[i].value;
    const auto& g = *params[i].grad;
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = static_cast<T>(beta1_ * m[j] + (1.0 - beta1_) * g[j]);
      v[j] = static_cast<T>(beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j]);
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      p[j] = static_cast<T>(p[j] - lr * mhat / (std::sqrt(vhat) + eps_));
    }
  }
}

template class SgdNesterov<float>;
template class SgdNesterov<double>;
template class Adam<float>;
template class Adam<double>;

}  // namespace repscope::nn
