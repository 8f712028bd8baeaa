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

#include "repscope/nn/batchnorm.hpp"

#include <cmath>

#include "repscope/common/error.hpp"

namespace repscope::nn {

template <class T>
void BatchNormState<T>::validate() const {
  const std::size_t f = gamma.size();
  if (beta.size() != f || running_mean.size() != f || running_var.size() != f)
    throw InvalidArgument("BatchNormState: parameter vectors differ in length");
  if (!(eps > 0.0)) throw InvalidArgument("BatchNormState: eps must be positive");
  if (!(momentum > 0.0 && momentum < 1.0)) throw InvalidArgument("BatchNormState: momentum must be in (0,1)");
  for (T v : running_var)
    if (v < T(0)) throw InvalidArgument("BatchNormState: negative running variance");
}

template <class T>
void batchnorm_forward(const Blob<T>& x, Blob<T>& y, BatchNormState<T>& state, BatchNormCache<T>* cache) {
  if (x.shape.size() < 2) throw ShapeError("batchnorm_forward: input needs a feature axis");
  const std::size_t n = x.shape[0];
  const std::size_t f = x.shape[1];
  const std::size_t inner = x.inner();
  if (f != state.features())
    throw ShapeError("batchnorm_forward: " + std::to_string(f) + " features, state has " +
                     std::to_string(state.features()));
  if (state.mode == Mode::train && n < 2)
    throw InvalidArgument("batchnorm_forward: train mode needs at least 2 samples, got " + std::to_string(n));

  y.resize(x.shape);
  if (cache) {
    cache->shape = x.shape;
    cache->xhat.resize(x.size());
    cache->inv_std.resize(f);
    cache->mode = state.mode;
    cache->valid = true;
  }
  const std::size_t m = n * inner;
  for (std::size_t c = 0; c < f; ++c) {
    double mean, var;
    if (state.mode == Mode::train) {
      double sum = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        const T* px = x.data.data() + (s * f + c) * inner;
        for (std::size_t i = 0; i < inner; ++i) sum += px[i];
      }
      mean = sum / static_cast<double>(m);
      double sq = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        const T* px = x.data.data() + (s * f + c) * inner;
        for (std::size_t i = 0; i < inner; ++i) {
          const double d = px[i] - mean;
          sq += d * d;
        }
      }
      var = sq / static_cast<double>(m);
      const double unbiased = m > 1 ? sq / static_cast<double>(m - 1) : var;
      state.running_mean[c] = static_cast<T>((1.0 - state.momentum) * state.running_mean[c] + state.momentum * mean);
      state.running_var[c] = static_cast<T>((1.0 - state.momentum) * state.running_var[c] + state.momentum * unbiased);
    } else {
      mean = state.running_mean[c];
      var = state.running_var[c];
    }
    const double inv_std = 1.0 / std::sqrt(var + state.eps);
    const double g = state.gamma[c];
    const double b = state.beta[c];
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t base = (s * f + c) * inner;
      for (std::size_t i = 0; i < inner; ++i) {
        const double xh = (x.data[base + i] - mean) * inv_std;
        y.data[base + i] = static_cast<T>(g * xh + b);
        if (cache) cache->xhat[base + i] = static_cast<T>(xh);
      }
    }
    if (cache) cache->inv_std[c] = static_cast<T>(inv_std);
  }
}

template <class T>
BatchNormGrads<T> batchnorm_backward(const Blob<T>& grad_out, const BatchNormCache<T>& cache,
                                     const BatchNormState<T>& state) {
  if (!cache.valid) throw InvalidArgument("batchnorm_backward: no forward cache");
  if (cache.shape != grad_out.shape)
    throw InvalidArgument("batchnorm_backward: stale cache for shape " + shape_string(cache.shape) +
                          ", gradient has " + shape_string(grad_out.shape));
  const std::size_t n = grad_out.shape[0];
  const std::size_t f = grad_out.shape[1];
  const std::size_t inner = grad_out.inner();
  if (f != state.features()) throw ShapeError("batchnorm_backward: feature-count mismatch");

  BatchNormGrads<T> g;
  g.grad_in.resize(grad_out.shape);
  g.grad_gamma.assign(f, T(0));
  g.grad_beta.assign(f, T(0));
  const double m = static_cast<double>(n * inner);
  for (std::size_t c = 0; c < f; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t base = (s * f + c) * inner;
      for (std::size_t i = 0; i < inner; ++i) {
        sum_dy += grad_out.data[base + i];
        sum_dy_xhat += static_cast<double>(grad_out.data[base + i]) * cache.xhat[base + i];
      }
    }
    g.grad_beta[c] = static_cast<T>(sum_dy);
    g.grad_gamma[c] = static_cast<T>(sum_dy_xhat);
    const double scale = static_cast<double>(state.gamma[c]) * cache.inv_std[c];
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t base = (s * f + c) * inner;
      for (std::size_t i = 0; i < inner; ++i) {
        const double dy = grad_out.data[base + i];
        if (cache.mode == Mode::train)
          g.grad_in.data[base + i] =
              static_cast<T>(scale * (dy - sum_dy / m - cache.xhat[base + i] * sum_dy_xhat / m));
        else
          g.grad_in.data[base + i] = static_cast<T>(scale * dy);
      }
    }
  }
  return g;
}

template struct BatchNormState<float>;
template struct BatchNormState<double>;
template void batchnorm_forward<float>(const Blob<float>&, Blob<float>&, BatchNormState<float>&, BatchNormCache<float>*);
template void batchnorm_forward<double>(const Blob<double>&, Blob<double>&, BatchNormState<double>&,
                                        BatchNormCache<double>*);
template BatchNormGrads<float> batchnorm_backward<float>(const Blob<float>&, const BatchNormCache<float>&,
                                                         const BatchNormState<float>&);
template BatchNormGrads<double> batchnorm_backward<double>(const Blob<double>&, const BatchNormCache<double>&,
                                                           const BatchNormState<double>&);

}  // namespace repscope::nn
