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

#include "repscope/cluster/reduce.hpp"

namespace repscope::cluster {

enum class KMeansInit { kmeans_plus_plus, random };

struct KMeansOptions {
  std::size_t max_iters = 300;
  double tol = 1e-6;  // stop once no centroid moves farther than this
  KMeansInit init = KMeansInit::kmeans_plus_plus;
};

struct ClusterAssignment {
  std::size_t k = 0;
  std::vector<std::uint32_t> labels;  // per matrix row, each < k
  RepMatrix centroids;                // k x cols
  double inertia = 0.0;               // sum of squared distances to the assigned centroid
  std::vector<double> inertia_trace;  // inertia after every assignment step
  std::size_t iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Lloyd's algorithm from k-means++ (or uniform random) seeding. Points go
/// to the nearest centroid (lowest index on ties); a cluster left empty is
/// re-seeded with the point farthest from its own centroid. Deterministic
/// given `seed`. Throws InvalidArgument if k is 0 or exceeds the row count,
/// or the input is not finite.
ClusterAssignment kmeans(const RepMatrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});
inline ClusterAssignment kmeans(const ReducedReps& x, std::size_t k, std::uint64_t seed,
                                const KMeansOptions& options = {}) {
  return kmeans(x.matrix, k, seed, options);
}

}  // namespace repscope::cluster
