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

#include "repscope/nn/network.hpp"
#include "repscope/tensor/tensor.hpp"

namespace repscope::sparsity {

/// Fraction of exactly-zero values in each channel of a post-ReLU tensor.
struct ChannelSparsity {
  std::size_t layer_index = 0;
  std::vector<double> values;  // one per channel, in [0, 1]
};

/// Fraction of exactly-zero values in the whole tensor.
struct LayerSparsity {
  std::size_t layer_index = 0;
  double value = 0.0;
};

/// values[c] = #{x in channel c : x <= tau} / (N*H*W). With the default
/// tau = 0 this is the exact-zero count (inputs are non-negative). Throws
/// InvalidArgument unless the tensor is tagged post_relu or tau < 0.
ChannelSparsity channel_sparsity(const ActTensor4& t, std::size_t layer_index = 0, double tau = 0.0);

/// #{x <= tau} / (N*C*H*W); equals the mean of channel_sparsity().values.
LayerSparsity layer_sparsity(const ActTensor4& t, std::size_t layer_index = 0, double tau = 0.0);

/// Running zero counts for one layer, fed batch by batch.
class SparsityCounter {
 public:
  SparsityCounter(std::size_t channels, double tau = 0.0);

  /// `data` holds n samples of (channels, spatial) values.
  void add(const float* data, std::size_t n, std::size_t spatial);
  void add(const double* data, std::size_t n, std::size_t spatial);

  ChannelSparsity channel(std::size_t layer_index) const;
  LayerSparsity layer(std::size_t layer_index) const;
  std::size_t elements_per_channel() const noexcept { return per_channel_; }

 private:
  template <class T>
  void add_impl(const T* data, std::size_t n, std::size_t spatial);

  std::vector<std::uint64_t> zeros_;
  std::uint64_t per_channel_ = 0;
  std::size_t spatial_ = 0;
  double tau_;
};

struct LayerSparsityRecord {
  std::size_t hidden_layer = 0;  // 1-based hidden layer number
  ChannelSparsity channel;
  LayerSparsity layer;
};

/// Draws `sample_count` training samples without replacement (seeded),
/// extracts each listed hidden layer (1-based, eval mode) and computes both
/// metrics. Results do not depend on `batch_size`.
std::vector<LayerSparsityRecord> sparsity_over_layers(nn::Network<float>& net, const LabeledDataset& data,
                                                      std::size_t sample_count, std::uint64_t seed,
                                                      std::span<const std::size_t> hidden_layers,
                                                      std::size_t batch_size = 256, double tau = 0.0);

}  // namespace repscope::sparsity
