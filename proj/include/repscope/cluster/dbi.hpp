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

#include "repscope/cluster/reduce.hpp"

namespace repscope::cluster {

enum class PurityMode { class_based, class_agnostic };
const char* to_string(PurityMode m) noexcept;

/// How the intra-cluster distance d(x_i) is measured.
enum class Scatter {
  centroid_mean,  // mean member-to-centroid distance (Davies-Bouldin)
  pairwise_mean,  // mean distance over member pairs (sensitivity check only)
};

struct PurityScore {
  double dbi = 0.0;
  std::vector<double> per_cluster_worst_ratio;  // max_j (d_i + d_j) / d(c_i, c_j), per present cluster
  std::vector<std::uint32_t> cluster_ids;       // label of each entry above, ascending
  PurityMode mode = PurityMode::class_agnostic;
};

/// Davies-Bouldin index over the clusters present in `labels` (one label per
/// row; absent label values are not clusters). Lower is purer. Throws
/// AnalysisError with fewer than two clusters, or "degenerate centroid
/// pair" when two centroids coincide while their scatter is non-zero (two
/// coincident zero-scatter clusters contribute a ratio of 0).
PurityScore dbi(const RepMatrix& x, std::span<const std::uint32_t> labels,
                PurityMode mode = PurityMode::class_agnostic, Scatter scatter = Scatter::centroid_mean);

/// DBI with ground-truth classes as clusters. `class_labels` are indexed by
/// source row (before zero rows were dropped) or by matrix row.
PurityScore class_based_purity(const ReducedReps& x, std::span<const std::uint32_t> class_labels,
                               Scatter scatter = Scatter::centroid_mean);

}  // namespace repscope::cluster
