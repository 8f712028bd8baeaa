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

#include "repscope/cluster/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/simd/kernels.hpp"

namespace repscope::cluster {
namespace {

double sqdist(const double* a, const double* b, std::size_t d) { return simd::squared_distance<double>(a, b, d); }

/// Assigns every row to its nearest centroid; returns the inertia.
double assign(const RepMatrix& x, const RepMatrix& cent, std::vector<std::uint32_t>& labels,
              std::vector<double>& dist) {
  const std::size_t d = x.cols;
  double inertia = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* p = x.data.data() + i * d;
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::size_t j = 0; j < cent.rows; ++j) {
      const double dj = sqdist(p, cent.data.data() + j * d, d);
      if (dj < best) {
        best = dj;
        arg = static_cast<std::uint32_t>(j);
      }
    }
    labels[i] = arg;
    dist[i] = best;
    inertia += best;
  }
  return inertia;
}

RepMatrix seed_centroids(const RepMatrix& x, std::size_t k, Rng& rng, KMeansInit init) {
  const std::size_t n = x.rows, d = x.cols;
  RepMatrix cent{k, d, std::vector<double>(k * d), x.axis};
  auto copy_row = [&](std::size_t dst, std::size_t src) {
    std::copy_n(x.data.begin() + static_cast<std::ptrdiff_t>(src * d), d,
                cent.data.begin() + static_cast<std::ptrdiff_t>(dst * d));
  };
  if (init == KMeansInit::random) {
    const auto picks = rng.sample_without_replacement(n, k);
    for (std::size_t j = 0; j < k; ++j) copy_row(j, picks[j]);
    return cent;
  }
  copy_row(0, static_cast<std::size_t>(rng.below(n)));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sqdist(x.data.data() + i * d, cent.data.data(), d);
  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == n)  // rounding left target beyond the last positive weight
        for (std::size_t i = n; i-- > 0;)
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
    } else {
      // Every point coincides with a chosen centroid; any choice is equivalent.
      pick = static_cast<std::size_t>(rng.below(n));
    }
    copy_row(j, pick);
    const double* c = cent.data.data() + j * d;
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sqdist(x.data.data() + i * d, c, d));
  }
  return cent;
}

}  // namespace

ClusterAssignment kmeans(const RepMatrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  x.validate();
  if (k == 0) throw InvalidArgument("kmeans: k must be >= 1");
  if (k > x.rows)
    throw InvalidArgument("kmeans: k = " + std::to_string(k) + " exceeds the " + std::to_string(x.rows) + " rows");
  if (options.max_iters == 0) throw InvalidArgument("kmeans: max_iters must be >= 1");
  if (!(options.tol >= 0.0)) throw InvalidArgument("kmeans: tol must be >= 0");

  const std::size_t n = x.rows, d = x.cols;
  Rng rng(seed);
  ClusterAssignment out;
  out.k = k;
  out.seed = seed;
  out.centroids = seed_centroids(x, k, rng, options.init);
  out.labels.assign(n, 0);

  RepMatrix& cent = out.centroids;
  std::vector<double> dist(n), next(k * d);
  std::vector<std::size_t> counts(k);
  std::vector<char> taken(n);
  for (std::size_t iter = 1; iter <= options.max_iters; ++iter) {
    out.inertia_trace.push_back(assign(x, cent, out.labels, dist));
    out.iterations = iter;

    // Re-seed empty clusters with the points farthest from their centroids.
    std::fill(counts.begin(), counts.end(), 0);
    for (auto l : out.labels) ++counts[l];
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i] && counts[out.labels[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      if (far == n) continue;  // nothing movable: every cluster is a singleton
      --counts[out.labels[far]];
      out.labels[far] = static_cast<std::uint32_t>(j);
      counts[j] = 1;
      dist[far] = 0.0;
      taken[far] = 1;
    }

    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double* c = next.data() + out.labels[i] * d;
      const double* p = x.data.data() + i * d;
      for (std::size_t t = 0; t < d; ++t) c[t] += p[t];
    }
    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double* c = next.data() + j * d;
      if (counts[j] == 0) {
        std::copy_n(cent.data.data() + j * d, d, c);
        continue;
      }
      for (std::size_t t = 0; t < d; ++t) c[t] /= static_cast<double>(counts[j]);
      shift = std::max(shift, std::sqrt(sqdist(c, cent.data.data() + j * d, d)));
    }
    cent.data.swap(next);
    if (shift < options.tol) {
      out.converged = true;
      break;
    }
  }
  out.inertia = assign(x, cent, out.labels, dist);
  out.inertia_trace.push_back(out.inertia);
  return out;
}

}  // namespace repscope::cluster
