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

#include "repscope/sparsity/sparsity.hpp"

#include <cmath>
#include <numeric>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/nn/extract.hpp"
#include "repscope/simd/kernels.hpp"

namespace repscope::sparsity {
namespace {

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("sparsity: tau must be a finite value >= 0");
}

SparsityCounter count_tensor(const ActTensor4& t, double tau) {
  if (t.tag() != SourceTag::post_relu)
    throw InvalidArgument("sparsity is defined on post-ReLU tensors; got a tensor tagged " +
                          std::string(to_string(t.tag())));
  SparsityCounter counter(t.dims().c, tau);
  counter.add(t.data().data(), t.dims().n, t.dims().spatial());
  return counter;
}

}  // namespace

SparsityCounter::SparsityCounter(std::size_t channels, double tau) : zeros_(channels, 0), tau_(tau) {
  check_tau(tau);
  if (channels == 0) throw InvalidArgument("SparsityCounter: channel count must be >= 1");
}

template <class T>
void SparsityCounter::add_impl(const T* data, std::size_t n, std::size_t spatial) {
  if (spatial == 0) throw InvalidArgument("SparsityCounter: spatial extent must be >= 1");
  if (spatial_ != 0 && spatial != spatial_) throw ShapeError("SparsityCounter: spatial extent changed between batches");
  spatial_ = spatial;
  const std::size_t c = zeros_.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t ch = 0; ch < c; ++ch) {
      const T* p = data + (s * c + ch) * spatial;
      if (tau_ == 0.0) {
        zeros_[ch] += simd::count_zeros<T>(p, spatial);
      } else {
        std::uint64_t z = 0;
        for (std::size_t i = 0; i < spatial; ++i) z += p[i] <= tau_ ? 1 : 0;
        zeros_[ch] += z;
      }
    }
  per_channel_ += static_cast<std::uint64_t>(n) * spatial;
}

void SparsityCounter::add(const float* data, std::size_t n, std::size_t spatial) { add_impl(data, n, spatial); }
void SparsityCounter::add(const double* data, std::size_t n, std::size_t spatial) { add_impl(data, n, spatial); }

ChannelSparsity SparsityCounter::channel(std::size_t layer_index) const {
  if (per_channel_ == 0) throw InvalidArgument("SparsityCounter: no samples added");
  ChannelSparsity out{layer_index, {}};
  out.values.reserve(zeros_.size());
  for (auto z : zeros_) out.values.push_back(static_cast<double>(z) / static_cast<double>(per_channel_));
  return out;
}

LayerSparsity SparsityCounter::layer(std::size_t layer_index) const {
  if (per_channel_ == 0) throw InvalidArgument("SparsityCounter: no samples added");
  const std::uint64_t total = std::accumulate(zeros_.begin(), zeros_.end(), std::uint64_t{0});
  return {layer_index,
          static_cast<double>(total) / (static_cast<double>(per_channel_) * static_cast<double>(zeros_.size()))};
}

ChannelSparsity channel_sparsity(const ActTensor4& t, std::size_t layer_index, double tau) {
  return count_tensor(t, tau).channel(layer_index);
}

LayerSparsity layer_sparsity(const ActTensor4& t, std::size_t layer_index, double tau) {
  return count_tensor(t, tau).layer(layer_index);
}

std::vector<LayerSparsityRecord> sparsity_over_layers(nn::Network<float>& net, const LabeledDataset& data,
                                                      std::size_t sample_count, std::uint64_t seed,
                                                      std::span<const std::size_t> hidden_layers,
                                                      std::size_t batch_size, double tau) {
  if (sample_count == 0 || sample_count > data.size())
    throw InvalidArgument("sparsity_over_layers: sample_count " + std::to_string(sample_count) +
                          " must be in 1.." + std::to_string(data.size()));
  Rng rng(derive_seed(seed, "sparsity-sample"));
  const auto picked = rng.sample_without_replacement(data.size(), sample_count);
  const ActTensor4 images = data.images.gather(picked);

  const auto shapes = net.spec().shapes();
  std::vector<std::size_t> indices;
  std::vector<SparsityCounter> counters;
  for (std::size_t h : hidden_layers) {
    indices.push_back(nn::hidden_layer_index(net.spec(), h));
    counters.emplace_back(shapes[indices.back()].c, tau);
  }
  nn::visit_representations(net, images, indices, batch_size,
                            [&](std::size_t which, std::size_t, const nn::Blob<float>& act) {
                              counters[which].add(act.data.data(), act.batch(), act.inner());
                            });
  std::vector<LayerSparsityRecord> out;
  for (std::size_t i = 0; i < hidden_layers.size(); ++i)
    out.push_back({hidden_layers[i], counters[i].channel(hidden_layers[i]), counters[i].layer(hidden_layers[i])});
  return out;
}

}  // namespace repscope::sparsity
