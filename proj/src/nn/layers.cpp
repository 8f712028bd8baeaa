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

#include "repscope/nn/layers.hpp"

#include <algorithm>

#include "repscope/common/error.hpp"
#include "repscope/simd/kernels.hpp"

namespace repscope::nn {
namespace {

template <class T>
void transpose(const T* src, std::size_t rows, std::size_t cols, T* dst) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
}

struct ConvGeom {
  std::size_t cin, h, w, k, stride, pad, ho, wo;
  std::size_t q() const { return cin * k * k; }
  std::size_t p() const { return ho * wo; }
};

ConvGeom geometry(const LayerSpec& s, const std::vector<std::size_t>& in_shape) {
  if (in_shape.size() != 4) throw ShapeError("conv2d: expects (N,C,H,W) input, got " + shape_string(in_shape));
  if (in_shape[1] != s.in_channels)
    throw ShapeError("conv2d: expects " + std::to_string(s.in_channels) + " channels, got " + std::to_string(in_shape[1]));
  ConvGeom g{s.in_channels, in_shape[2], in_shape[3], s.kernel, s.stride, s.padding, 0, 0};
  if (g.h + 2 * g.pad < g.k || g.w + 2 * g.pad < g.k) throw ShapeError("conv2d: kernel larger than input");
  g.ho = (g.h + 2 * g.pad - g.k) / g.stride + 1;
  g.wo = (g.w + 2 * g.pad - g.k) / g.stride + 1;
  return g;
}

template <class T>
void im2col(const ConvGeom& g, const T* img, T* col) {
  const std::size_t p = g.p();
  for (std::size_t ci = 0; ci < g.cin; ++ci)
    for (std::size_t ky = 0; ky < g.k; ++ky)
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        T* row = col + ((ci * g.k + ky) * g.k + kx) * p;
        for (std::size_t oy = 0; oy < g.ho; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad);
          T* dst = row + oy * g.wo;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) {
            std::fill_n(dst, g.wo, T(0));
            continue;
          }
          const T* src = img + (ci * g.h + static_cast<std::size_t>(iy)) * g.w;
          for (std::size_t ox = 0; ox < g.wo; ++ox) {
            const std::ptrdiff_t ix =
                static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad);
            dst[ox] = (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) ? T(0) : src[ix];
          }
        }
      }
}

template <class T>
void col2im_add(const ConvGeom& g, const T* col, T* img) {
  const std::size_t p = g.p();
  for (std::size_t ci = 0; ci < g.cin; ++ci)
    for (std::size_t ky = 0; ky < g.k; ++ky)
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        const T* row = col + ((ci * g.k + ky) * g.k + kx) * p;
        for (std::size_t oy = 0; oy < g.ho; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
          T* dst = img + (ci * g.h + static_cast<std::size_t>(iy)) * g.w;
          for (std::size_t ox = 0; ox < g.wo; ++ox) {
            const std::ptrdiff_t ix =
                static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad);
            if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(g.w)) dst[ix] += row[oy * g.wo + ox];
          }
        }
      }
}

}  // namespace

// ---------------------------------------------------------------------------
// Conv2d

template <class T>
Conv2d<T>::Conv2d(const LayerSpec& spec)
    : Layer<T>(spec),
      weight(spec.out_channels * spec.in_channels * spec.kernel * spec.kernel),
      bias(spec.out_channels),
      weight_grad(weight.size()),
      bias_grad(bias.size()) {}

template <class T>
std::size_t Conv2d<T>::patch() const noexcept {
  const auto& s = this->spec();
  return s.in_channels * s.kernel * s.kernel;
}

template <class T>
void Conv2d<T>::forward(const Blob<T>& in, Blob<T>& out, Mode mode) {
  const auto& s = this->spec();
  const ConvGeom g = geometry(s, in.shape);
  const std::size_t n = in.shape[0], q = g.q(), p = g.p(), cout = s.out_channels;
  out.resize({n, cout, g.ho, g.wo});
  const bool keep = mode == Mode::train;
  if (keep)
    cols_.resize(n * q * p);
  else
    scratch_.resize(q * p);
  for (std::size_t i = 0; i < n; ++i) {
    T* col = keep ? cols_.data() + i * q * p : scratch_.data();
    im2col(g, in.sample(i), col);
    T* dst = out.sample(i);
    simd::gemm<T>(cout, p, q, weight.data(), q, col, p, dst, p);
    for (std::size_t co = 0; co < cout; ++co) {
      const T b = bias[co];
      T* row = dst + co * p;
      for (std::size_t j = 0; j < p; ++j) row[j] += b;
    }
  }
  if (!keep) cols_.clear();
}

template <class T>
void Conv2d<T>::backward(const Blob<T>& in, const Blob<T>&, const Blob<T>& grad_out, Blob<T>* grad_in) {
  const auto& s = this->spec();
  const ConvGeom g = geometry(s, in.shape);
  const std::size_t n = in.shape[0], q = g.q(), p = g.p(), cout = s.out_channels;
  if (grad_out.shape != std::vector<std::size_t>{n, cout, g.ho, g.wo})
    throw ShapeError("conv2d backward: gradient shape " + shape_string(grad_out.shape));
  const bool have_cols = cols_.size() == n * q * p;

  std::vector<T> col_t(p * q), dcol, w_t;
  std::vector<T> col_tmp;
  if (!have_cols) col_tmp.resize(q * p);
  if (grad_in) {
    grad_in->resize(in.shape);
    std::fill(grad_in->data.begin(), grad_in->data.end(), T(0));
    dcol.resize(q * p);
    w_t.resize(q * cout);
    transpose(weight.data(), cout, q, w_t.data());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const T* col;
    if (have_cols) {
      col = cols_.data() + i * q * p;
    } else {
      im2col(g, in.sample(i), col_tmp.data());
      col = col_tmp.data();
    }
    const T* dy = grad_out.sample(i);
    transpose(col, q, p, col_t.data());
    simd::gemm<T>(cout, q, p, dy, p, col_t.data(), q, weight_grad.data(), q, true);
    for (std::size_t co = 0; co < cout; ++co) {
      T acc = 0;
      const T* row = dy + co * p;
      for (std::size_t j = 0; j < p; ++j) acc += row[j];
      bias_grad[co] += acc;
    }
    if (grad_in) {
      simd::gemm<T>(q, p, cout, w_t.data(), cout, dy, p, dcol.data(), p);
      col2im_add(g, dcol.data(), grad_in->sample(i));
    }
  }
}

template <class T>
std::vector<ParamRef<T>> Conv2d<T>::params() {
  const auto& s = this->spec();
  return {{"weight", {s.out_channels, s.in_channels, s.kernel, s.kernel}, &weight, &weight_grad},
          {"bias", {s.out_channels}, &bias, &bias_grad}};
}

// ---------------------------------------------------------------------------
// Dense

template <class T>
Dense<T>::Dense(const LayerSpec& spec)
    : Layer<T>(spec),
      weight(spec.out_features * spec.in_features),
      bias(spec.out_features),
      weight_grad(weight.size()),
      bias_grad(bias.size()) {}

template <class T>
void Dense<T>::forward(const Blob<T>& in, Blob<T>& out, Mode) {
  const auto& s = this->spec();
  if (in.shape.size() != 2 || in.shape[1] != s.in_features)
    throw ShapeError("dense: expects (N," + std::to_string(s.in_features) + ") input, got " + shape_string(in.shape));
  const std::size_t n = in.shape[0], fi = s.in_features, fo = s.out_features;
  out.resize({n, fo});
  transposed_.resize(fi * fo);
  transpose(weight.data(), fo, fi, transposed_.data());
  simd::gemm<T>(n, fo, fi, in.data.data(), fi, transposed_.data(), fo, out.data.data(), fo);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t o = 0; o < fo; ++o) out.data[i * fo + o] += bias[o];
}

template <class T>
void Dense<T>::backward(const Blob<T>& in, const Blob<T>&, const Blob<T>& grad_out, Blob<T>* grad_in) {
  const auto& s = this->spec();
  const std::size_t n = in.shape[0], fi = s.in_features, fo = s.out_features;
  if (grad_out.shape != std::vector<std::size_t>{n, fo}) throw ShapeError("dense backward: gradient shape mismatch");
  std::vector<T> dy_t(fo * n);
  transpose(grad_out.data.data(), n, fo, dy_t.data());
  simd::gemm<T>(fo, fi, n, dy_t.data(), n, in.data.data(), fi, weight_grad.data(), fi, true);
  for (std::size_t o = 0; o < fo; ++o) {
    T acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += dy_t[o * n + i];
    bias_grad[o] += acc;
  }
  if (grad_in) {
    grad_in->resize(in.shape);
    simd::gemm<T>(n, fi, fo, grad_out.data.data(), fo, weight.data(), fi, grad_in->data.data(), fi);
  }
}

template <class T>
std::vector<ParamRef<T>> Dense<T>::params() {
  const auto& s = this->spec();
  return {{"weight", {s.out_features, s.in_features}, &weight, &weight_grad},
          {"bias", {s.out_features}, &bias, &bias_grad}};
}

// ---------------------------------------------------------------------------
// ReLU, pooling, flatten

template <class T>
void Relu<T>::forward(const Blob<T>& in, Blob<T>& out, Mode) {
  out.resize(in.shape);
  for (std::size_t i = 0; i < in.size(); ++i) out.data[i] = in.data[i] > T(0) ? in.data[i] : T(0);
}

template <class T>
void Relu<T>::backward(const Blob<T>& in, const Blob<T>&, const Blob<T>& grad_out, Blob<T>* grad_in) {
  if (!grad_in) return;
  grad_in->resize(in.shape);
  for (std::size_t i = 0; i < in.size(); ++i) grad_in->data[i] = in.data[i] > T(0) ? grad_out.data[i] : T(0);
}

template <class T>
void MaxPool2d<T>::forward(const Blob<T>& in, Blob<T>& out, Mode) {
  const auto& s = this->spec();
  if (in.shape.size() != 4) throw ShapeError("maxpool2d: expects (N,C,H,W) input");
  const std::size_t n = in.shape[0], c = in.shape[1], h = in.shape[2], w = in.shape[3];
  if (h < s.window || w < s.window) throw ShapeError("maxpool2d: window larger than input");
  const std::size_t ho = (h - s.window) / s.stride + 1, wo = (w - s.window) / s.stride + 1;
  out.resize({n, c, ho, wo});
  argmax_.resize(out.size());
  for (std::size_t plane = 0; plane < n * c; ++plane) {
    const T* src = in.data.data() + plane * h * w;
    for (std::size_t oy = 0; oy < ho; ++oy)
      for (std::size_t ox = 0; ox < wo; ++ox) {
        std::size_t best = (oy * s.stride) * w + ox * s.stride;
        for (std::size_t ky = 0; ky < s.window; ++ky)
          for (std::size_t kx = 0; kx < s.window; ++kx) {
            const std::size_t idx = (oy * s.stride + ky) * w + ox * s.stride + kx;
            if (src[idx] > src[best]) best = idx;
          }
        const std::size_t o = (plane * ho + oy) * wo + ox;
        out.data[o] = src[best];
        argmax_[o] = static_cast<std::uint32_t>(best);
      }
  }
}

template <class T>
void MaxPool2d<T>::backward(const Blob<T>& in, const Blob<T>& out, const Blob<T>& grad_out, Blob<T>* grad_in) {
  if (!grad_in) return;
  if (argmax_.size() != out.size()) throw InvalidArgument("maxpool2d backward: no forward cache");
  grad_in->resize(in.shape);
  std::fill(grad_in->data.begin(), grad_in->data.end(), T(0));
  const std::size_t hw = in.shape[2] * in.shape[3];
  const std::size_t ohw = out.shape[2] * out.shape[3];
  for (std::size_t o = 0; o < out.size(); ++o) {
    const std::size_t plane = o / ohw;
    grad_in->data[plane * hw + argmax_[o]] += grad_out.data[o];
  }
}

template <class T>
void Flatten<T>::forward(const Blob<T>& in, Blob<T>& out, Mode) {
  out.shape = {in.batch(), in.per_sample()};
  out.data = in.data;
}

template <class T>
void Flatten<T>::backward(const Blob<T>& in, const Blob<T>&, const Blob<T>& grad_out, Blob<T>* grad_in) {
  if (!grad_in) return;
  grad_in->shape = in.shape;
  grad_in->data = grad_out.data;
}

// ---------------------------------------------------------------------------
// BatchNorm

template <class T>
void BatchNorm<T>::forward(const Blob<T>& in, Blob<T>& out, Mode mode) {
  state.mode = mode;
  batchnorm_forward(in, out, state, &cache_);
}

template <class T>
void BatchNorm<T>::backward(const Blob<T>&, const Blob<T>&, const Blob<T>& grad_out, Blob<T>* grad_in) {
  auto g = batchnorm_backward(grad_out, cache_, state);
  if (gamma_grad.size() != state.features()) {
    gamma_grad.assign(state.features(), T(0));
    beta_grad.assign(state.features(), T(0));
  }
  for (std::size_t c = 0; c < state.features(); ++c) {
    gamma_grad[c] += g.grad_gamma[c];
    beta_grad[c] += g.grad_beta[c];
  }
  if (grad_in) *grad_in = std::move(g.grad_in);
}

template <class T>
std::vector<ParamRef<T>> BatchNorm<T>::params() {
  if (gamma_grad.size() != state.features()) {
    gamma_grad.assign(state.features(), T(0));
    beta_grad.assign(state.features(), T(0));
  }
  return {{"gamma", {state.features()}, &state.gamma, &gamma_grad},
          {"beta", {state.features()}, &state.beta, &beta_grad}};
}

template <class T>
std::vector<ParamRef<T>> BatchNorm<T>::buffers() {
  return {{"running_mean", {state.features()}, &state.running_mean, nullptr},
          {"running_var", {state.features()}, &state.running_var, nullptr}};
}

template <class T>
std::unique_ptr<Layer<T>> make_layer(const LayerSpec& spec) {
  switch (spec.kind) {
    case LayerKind::conv2d: return std::make_unique<Conv2d<T>>(spec);
    case LayerKind::dense: return std::make_unique<Dense<T>>(spec);
    case LayerKind::relu: return std::make_unique<Relu<T>>(spec);
    case LayerKind::maxpool2d: return std::make_unique<MaxPool2d<T>>(spec);
    case LayerKind::flatten_to_dense_input: return std::make_unique<Flatten<T>>(spec);
    case LayerKind::batchnorm: return std::make_unique<BatchNorm<T>>(spec);
  }
  throw InvalidArgument("make_layer: unknown layer kind");
}

template class Conv2d<float>;
template class Conv2d<double>;
template class Dense<float>;
template class Dense<double>;
template class Relu<float>;
template class Relu<double>;
template class MaxPool2d<float>;
template class MaxPool2d<double>;
template class Flatten<float>;
template class Flatten<double>;
template class BatchNorm<float>;
template class BatchNorm<double>;
template std::unique_ptr<Layer<float>> make_layer<float>(const LayerSpec&);
template std::unique_ptr<Layer<double>> make_layer<double>(const LayerSpec&);

}  // namespace repscope::nn
