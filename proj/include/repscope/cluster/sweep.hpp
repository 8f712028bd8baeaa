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
#include <vector>

#include "repscope/cluster/dbi.hpp"
#include "repscope/cluster/kmeans.hpp"

namespace repscope::cluster {

struct SweepOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 15;
  std::size_t restarts = 5;
  KMeansOptions kmeans;
};

struct SweepResult {
  std::size_t k_star = 0;
  std::vector<std::size_t> ks;
  std::vector<double> dbi;      // per k; NaN where DBI is undefined for the best run
  std::vector<double> inertia;  // per k, lowest over restarts
  ClusterAssignment best;       // lowest-inertia run at k_star
  PurityScore best_score;       // its class-agnostic DBI
};

/// For every k in [k_min, k_max] keeps the lowest-inertia of `restarts`
/// k-means runs (stream seeds derived from (seed, stream, k, restart)) and
/// scores it with DBI. k_star minimizes DBI, ties toward the smaller k.
/// Throws InvalidArgument when k_max exceeds the row count and
/// AnalysisError when DBI is undefined for every k.
SweepResult optimal_k_sweep(const RepMatrix& x, std::uint64_t seed, const SweepOptions& options = {},
                            std::uint64_t stream = 0);
inline SweepResult optimal_k_sweep(const ReducedReps& x, std::uint64_t seed, const SweepOptions& options = {}) {
  return optimal_k_sweep(x.matrix, seed, options, x.layer_index);
}

}  // namespace repscope::cluster
