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

#include "repscope/cluster/analysis.hpp"

#include <set>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/nn/extract.hpp"

namespace repscope::cluster {

std::vector<LayerClustering> clustering_over_layers(nn::Network<float>& net, const LabeledDataset& data,
                                                    std::size_t sample_count, std::uint64_t seed,
                                                    std::span<const std::size_t> hidden_layers,
                                                    const SweepOptions& options, std::size_t batch_size,
                                                    std::size_t unstable_below) {
  if (sample_count == 0 || sample_count > data.size())
    throw InvalidArgument("clustering_over_layers: sample_count " + std::to_string(sample_count) +
                          " must be in 1.." + std::to_string(data.size()));
  Rng rng(derive_seed(seed, "clustering-sample"));
  const auto picked = rng.sample_without_replacement(data.size(), sample_count);
  const ActTensor4 images = data.images.gather(picked);
  std::vector<std::uint32_t> labels;
  labels.reserve(picked.size());
  for (auto i : picked) labels.push_back(data.labels[i]);

  const auto shapes = net.spec().shapes();
  std::vector<std::size_t> indices;
  std::vector<RepMatrix> reps;
  for (std::size_t h : hidden_layers) {
    indices.push_back(nn::hidden_layer_index(net.spec(), h));
    const std::size_t c = shapes[indices.back()].c;
    reps.push_back(RepMatrix{sample_count, c, std::vector<double>(sample_count * c), AxisTag::spatial_mean});
  }
  nn::visit_representations(net, images, indices, batch_size,
                            [&](std::size_t which, std::size_t first, const nn::Blob<float>& act) {
                              RepMatrix& m = reps[which];
                              for (std::size_t s = 0; s < act.batch(); ++s)
                                spatial_average_row(act.sample(s), m.cols, act.inner(), &m.data[(first + s) * m.cols]);
                            });

  std::vector<LayerClustering> out;
  for (std::size_t i = 0; i < hidden_layers.size(); ++i) {
    LayerClustering rec;
    rec.hidden_layer = hidden_layers[i];
    rec.unstable = hidden_layers[i] < unstable_below;
    try {
      const ReducedReps reduced = normalize_rows(reps[i], hidden_layers[i]);
      rec.rows = reduced.matrix.rows;
      rec.dropped_rows = reduced.dropped_rows.size();
      std::set<std::uint32_t> present;
      for (auto r : reduced.kept_rows) present.insert(labels[r]);
      rec.classes_present = present.size();
      try {
        rec.class_based = class_based_purity(reduced, labels);
      } catch (const AnalysisError& e) {
        rec.class_error = e.what();
      }
      try {
        SweepOptions o = options;
        if (o.k_max > reduced.matrix.rows) throw AnalysisError("fewer rows than k_max");
        rec.sweep = optimal_k_sweep(reduced.matrix, seed, o, hidden_layers[i]);
      } catch (const AnalysisError& e) {
        rec.sweep_error = e.what();
      }
    } catch (const AnalysisError& e) {
      rec.dropped_rows = sample_count;
      rec.class_error = rec.sweep_error = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace repscope::cluster
