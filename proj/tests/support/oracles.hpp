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

// Independent reference implementations used by the unit and acceptance
// tests. Everything here is written in the most direct way possible (plain
// loops, no SIMD, no shared code with the library) so that agreement with
// the optimized paths is meaningful.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "repscope/tensor/tensor.hpp"

namespace repscope::testing {

/// Fresh, empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& stem) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (stem + "_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Random post-ReLU tensor: each element is exactly zero with probability
/// `zero_fraction`, otherwise uniform in (0, 1].
inline ActTensor4 random_relu_tensor(std::mt19937_64& gen, Dims4 dims, double zero_fraction) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> data(dims.count());
  for (auto& v : data) v = u(gen) < zero_fraction ? 0.0 : 1.0 - u(gen);
  return ActTensor4(dims, std::move(data), SourceTag::post_relu);
}

/// Fraction of exactly-zero elements of every channel, by direct counting.
inline std::vector<double> oracle_channel_sparsity(const ActTensor4& t) {
  const Dims4 d = t.dims();
  std::vector<double> out(d.c);
  for (std::size_t c = 0; c < d.c; ++c) {
    std::size_t zeros = 0;
    for (std::size_t n = 0; n < d.n; ++n)
      for (std::size_t h = 0; h < d.h; ++h)
        for (std::size_t w = 0; w < d.w; ++w)
          if (t.at(n, c, h, w) == 0.0) ++zeros;
    out[c] = static_cast<double>(zeros) / static_cast<double>(d.n * d.h * d.w);
  }
  return out;
}

/// Fraction of exactly-zero elements of the whole tensor.
inline double oracle_layer_sparsity(const ActTensor4& t) {
  std::size_t zeros = 0;
  for (double v : t.data())
    if (v == 0.0) ++zeros;
  return static_cast<double>(zeros) / static_cast<double>(t.size());
}

inline double euclid(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Davies-Bouldin index with a double loop over clusters: scatter is the
/// mean Euclidean distance of the members to their centroid, separation
/// the Euclidean distance between centroids. Labels need not be dense;
/// only clusters that have members take part.
inline double oracle_dbi(const std::vector<std::vector<double>>& points, const std::vector<std::uint32_t>& labels) {
  const std::size_t dim = points.front().size();
  std::map<std::uint32_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  std::vector<std::vector<double>> centroid;
  std::vector<double> scatter;
  for (const auto& [label, idx] : members) {
    std::vector<double> c(dim, 0.0);
    for (std::size_t i : idx)
      for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
    for (auto& v : c) v /= static_cast<double>(idx.size());
    double s = 0.0;
    for (std::size_t i : idx) s += euclid(points[i].data(), c.data(), dim);
    scatter.push_back(s / static_cast<double>(idx.size()));
    centroid.push_back(std::move(c));
  }
  const std::size_t k = centroid.size();
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double ratio = (scatter[i] + scatter[j]) / euclid(centroid[i].data(), centroid[j].data(), dim);
      worst = std::max(worst, ratio);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

/// Minimum within-cluster sum of squares over every partition of the
/// points into exactly k non-empty groups (brute force, k^n labelings).
inline double oracle_optimal_inertia(const std::vector<std::vector<double>>& points, std::size_t k) {
  const std::size_t n = points.size();
  const std::size_t dim = points.front().size();
  std::vector<std::size_t> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++count[label[i]];
      for (std::size_t d = 0; d < dim; ++d) sum[label[i]][d] += points[i][d];
    }
    if (std::all_of(count.begin(), count.end(), [](std::size_t c) { return c > 0; })) {
      double sse = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = points[i][d] - sum[label[i]][d] / static_cast<double>(count[label[i]]);
          sse += diff * diff;
        }
      best = std::min(best, sse);
    }
    std::size_t pos = 0;
    while (pos < n && ++label[pos] == k) label[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

/// Points drawn from g isotropic Gaussian blobs whose centres sit on the
/// vertices of a scaled simplex-like layout, so every pair of centres is
/// at least `separation` apart; sigma is the per-axis standard deviation.
struct BlobSet {
  std::vector<std::vector<double>> points;
  std::vector<std::uint32_t> labels;
};

inline BlobSet make_blobs(std::mt19937_64& gen, std::size_t g, std::size_t per_blob, std::size_t dim,
                          double separation, double sigma) {
  std::normal_distribution<double> normal(0.0, 1.0);
  BlobSet out;
  for (std::size_t b = 0; b < g; ++b) {
    // Centre b is separation/sqrt(2) along axis b: pairwise distance = separation.
    std::vector<double> centre(dim, 0.0);
    centre[b % dim] = separation / std::sqrt(2.0) * static_cast<double>(1 + b / dim);
    for (std::size_t i = 0; i < per_blob; ++i) {
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = centre[d] + sigma * normal(gen);
      out.points.push_back(std::move(p));
      out.labels.push_back(static_cast<std::uint32_t>(b));
    }
  }
  return out;
}

inline RepMatrix to_matrix(const std::vector<std::vector<double>>& points) {
  RepMatrix m;
  m.rows = points.size();
  m.cols = points.front().size();
  for (const auto& p : points) m.data.insert(m.data.end(), p.begin(), p.end());
  return m;
}

/// Co-membership matrix: entry (i, j) is true when rows i and j share a
/// cluster. Identical for partitions that differ only by label renaming.
inline std::vector<bool> co_membership(const std::vector<std::uint32_t>& labels) {
  const std::size_t n = labels.size();
  std::vector<bool> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = labels[i] == labels[j];
  return out;
}

/// Relative error that tolerates values near zero.
inline double rel_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace repscope::testing
