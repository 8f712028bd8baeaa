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

#include "repscope/nn/extract.hpp"

#include <algorithm>
#include <numeric>

#include "repscope/common/error.hpp"
#include "repscope/nn/train.hpp"

namespace repscope::nn {

std::size_t hidden_layer_count(const NetworkSpec& spec) { return spec.relu_layers().size(); }

std::size_t hidden_layer_index(const NetworkSpec& spec, std::size_t hidden) {
  const auto relus = spec.relu_layers();
  if (hidden < 1 || hidden > relus.size())
    throw InvalidArgument("hidden layer " + std::to_string(hidden) + " out of range 1.." +
                          std::to_string(relus.size()));
  return relus[hidden - 1];
}

void visit_representations(Network<float>& net, const ActTensor4& images, std::span<const std::size_t> layer_indices,
                           std::size_t batch_size, const RepresentationVisitor& visit) {
  if (batch_size == 0) throw InvalidArgument("visit_representations: batch_size must be >= 1");
  const auto& layers = net.spec().layers;
  std::size_t deepest = 0;
  for (std::size_t li : layer_indices) {
    if (li >= layers.size() || layers[li].kind != LayerKind::relu)
      throw InvalidArgument("layer " + std::to_string(li) + " is not a ReLU output");
    deepest = std::max(deepest, li);
  }
  if (layer_indices.empty()) return;
  const std::size_t n = images.dims().n;
  Blob<float> batch;
  std::vector<std::size_t> idx;
  for (std::size_t begin = 0; begin < n; begin += batch_size) {
    const std::size_t end = std::min(n, begin + batch_size);
    idx.resize(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    load_batch(images, idx, batch);
    net.forward(batch, Mode::eval, deepest);
    for (std::size_t w = 0; w < layer_indices.size(); ++w) visit(w, begin, net.activation(layer_indices[w]));
  }
}

ActTensor4 extract_representations(Network<float>& net, const ActTensor4& images, std::size_t layer_index,
                                   std::size_t batch_size) {
  const auto shapes = net.spec().shapes();
  if (layer_index >= shapes.size()) throw InvalidArgument("layer " + std::to_string(layer_index) + " out of range");
  const ActShape s = shapes[layer_index];
  const std::size_t n = images.dims().n;
  std::vector<double> out(n * s.count());
  const std::size_t one = std::size_t{1};
  visit_representations(net, images, std::span<const std::size_t>(&layer_index, one), batch_size,
                        [&](std::size_t, std::size_t first, const Blob<float>& act) {
                          std::copy(act.data.begin(), act.data.end(), out.begin() + first * s.count());
                        });
  return ActTensor4(Dims4{n, s.c, s.h, s.w}, std::move(out), SourceTag::post_relu);
}

}  // namespace repscope::nn
