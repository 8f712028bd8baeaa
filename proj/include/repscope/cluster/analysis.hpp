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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repscope/cluster/sweep.hpp"
#include "repscope/nn/network.hpp"

namespace repscope::cluster {

struct LayerClustering {
  std::size_t hidden_layer = 0;  // 1-based
  std::size_t rows = 0;          // representations clustered (after dropping zero rows)
  std::size_t dropped_rows = 0;
  std::size_t classes_present = 0;
  std::optional<PurityScore> class_based;  // empty when undefined (error text in class_error)
  std::string class_error;
  std::optional<SweepResult> sweep;  // empty when undefined (error text in sweep_error)
  std::string sweep_error;
  bool unstable = false;  // layer flagged as not informative for this architecture
};

/// Draws `sample_count` training samples without replacement (seeded), then
/// for every listed hidden layer: eval-mode extraction, spatial averaging,
/// row normalization, class-based DBI and the class-agnostic optimal-k
/// sweep. Layers numbered below `unstable_below` are flagged. An analysis
/// that is undefined for a layer (e.g. all-zero representations) is
/// reported in the record rather than thrown.
std::vector<LayerClustering> clustering_over_layers(nn::Network<float>& net, const LabeledDataset& data,
                                                    std::size_t sample_count, std::uint64_t seed,
                                                    std::span<const std::size_t> hidden_layers,
                                                    const SweepOptions& options = {}, std::size_t batch_size = 256,
                                                    std::size_t unstable_below = 0);

}  // namespace repscope::cluster
