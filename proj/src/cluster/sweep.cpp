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

#include "repscope/cluster/sweep.hpp"

#include <cmath>
#include <limits>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"

namespace repscope::cluster {

SweepResult optimal_k_sweep(const RepMatrix& x, std::uint64_t seed, const SweepOptions& options,
                            std::uint64_t stream) {
  if (options.k_min < 1 || options.k_min > options.k_max)
    throw InvalidArgument("optimal_k_sweep: need 1 <= k_min <= k_max");
  if (options.k_max > x.rows)
    throw InvalidArgument("optimal_k_sweep: k_max = " + std::to_string(options.k_max) + " exceeds the " +
                          std::to_string(x.rows) + " rows");
  if (options.restarts < 1) throw InvalidArgument("optimal_k_sweep: restarts must be >= 1");

  SweepResult out;
  double best_dbi = std::numeric_limits<double>::infinity();
  for (std::size_t k = options.k_min; k <= options.k_max; ++k) {
    ClusterAssignment best_run;
    bool have = false;
    for (std::size_t r = 0; r < options.restarts; ++r) {
      auto run = kmeans(x, k, derive_seed(seed, "kmeans", {stream, k, r}), options.kmeans);
      if (!have || run.inertia < best_run.inertia) {
        best_run = std::move(run);
        have = true;
      }
    }
    double score = std::numeric_limits<double>::quiet_NaN();
    PurityScore purity;
    try {
      purity = dbi(x, best_run.labels, PurityMode::class_agnostic);
      score = purity.dbi;
    } catch (const AnalysisError&) {
      // Fewer than two non-empty clusters or coincident centroids: DBI undefined at this k.
    }
    out.ks.push_back(k);
    out.dbi.push_back(score);
    out.inertia.push_back(best_run.inertia);
    if (!std::isnan(score) && score < best_dbi) {
      best_dbi = score;
      out.k_star = k;
      out.best = std::move(best_run);
      out.best_score = std::move(purity);
    }
  }
  if (out.k_star == 0) throw AnalysisError("optimal_k_sweep: DBI is undefined for every k");
  return out;
}

}  // namespace repscope::cluster
