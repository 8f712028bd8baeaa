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

#include <functional>
#include <span>
#include <vector>

#include "repscope/nn/network.hpp"
#include "repscope/tensor/tensor.hpp"

namespace repscope::nn {

/// Index into spec.layers of hidden layer `hidden` (1-based), i.e. the
/// output of its ReLU. Throws InvalidArgument when out of range.
std::size_t hidden_layer_index(const NetworkSpec& spec, std::size_t hidden);
std::size_t hidden_layer_count(const NetworkSpec& spec);

/// Eval-mode forward of `images` through `layer_index`, which must name a
/// ReLU. Dense outputs become (N, D, 1, 1). The result is tagged post_relu,
/// keeps sample order and does not depend on `batch_size`.
ActTensor4 extract_representations(Network<float>& net, const ActTensor4& images, std::size_t layer_index,
                                   std::size_t batch_size = 256);

/// Streams several ReLU outputs batch by batch without materializing them.
/// `visit(position in layer_indices, first sample of the batch, activations)`
/// is called in batch order, then layer order.
using RepresentationVisitor = std::function<void(std::size_t which, std::size_t first, const Blob<float>& act)>;
void visit_representations(Network<float>& net, const ActTensor4& images, std::span<const std::size_t> layer_indices,
                           std::size_t batch_size, const RepresentationVisitor& visit);

}  // namespace repscope::nn
