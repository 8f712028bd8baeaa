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

#include "repscope/cluster/dbi.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "repscope/common/error.hpp"
#include "repscope/simd/kernels.hpp"

namespace repscope::cluster {

const char* to_string(PurityMode m) noexcept {
  return m == PurityMode::class_based ? "class_based" : "class_agnostic";
}

PurityScore dbi(const RepMatrix& x, std::span<const std::uint32_t> labels, PurityMode mode, Scatter scatter) {
  x.validate();
  if (labels.size() != x.rows)
    throw InvalidArgument("dbi: " + std::to_string(labels.size()) + " labels for " + std::to_string(x.rows) + " rows");
  const std::size_t d = x.cols;

  // Dense cluster numbering in ascending label order.
  std::map<std::uint32_t, std::size_t> slot;
  for (auto l : labels) slot.emplace(l, 0);
  if (slot.size() < 2) throw AnalysisError("dbi: needs at least 2 clusters, found " + std::to_string(slot.size()));
  PurityScore out;
  out.mode = mode;
  for (auto& [label, s] : slot) {
    s = out.cluster_ids.size();
    out.cluster_ids.push_back(label);
  }
  const std::size_t k = slot.size();

  std::vector<std::size_t> count(k, 0);
  std::vector<double> cent(k * d, 0.0);
  std::vector<std::size_t> member_slot(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const std::size_t s = slot[labels[i]];
    member_slot[i] = s;
    ++count[s];
    const double* p = x.data.data() + i * d;
    for (std::size_t t = 0; t < d; ++t) cent[s * d + t] += p[t];
  }
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t t = 0; t < d; ++t) cent[s * d + t] /= static_cast<double>(count[s]);

  std::vector<double> spread(k, 0.0);
  if (scatter == Scatter::centroid_mean) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      const std::size_t s = member_slot[i];
      spread[s] += std::sqrt(simd::squared_distance<double>(x.data.data() + i * d, cent.data() + s * d, d));
    }
    for (std::size_t s = 0; s < k; ++s) spread[s] /= static_cast<double>(count[s]);
  } else {
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < x.rows; ++i) members[member_slot[i]].push_back(i);
    for (std::size_t s = 0; s < k; ++s) {
      const auto& m = members[s];
      if (m.size() < 2) continue;
      double sum = 0.0;
      for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = a + 1; b < m.size(); ++b)
          sum += std::sqrt(simd::squared_distance<double>(x.data.data() + m[a] * d, x.data.data() + m[b] * d, d));
      spread[s] = sum / (static_cast<double>(m.size()) * static_cast<double>(m.size() - 1) / 2.0);
    }
  }

  out.per_cluster_worst_ratio.assign(k, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double sep = std::sqrt(simd::squared_distance<double>(cent.data() + i * d, cent.data() + j * d, d));
      const double num = spread[i] + spread[j];
      double ratio;
      if (sep == 0.0) {
        if (num > 0.0)
          throw AnalysisError("dbi: degenerate centroid pair (clusters " + std::to_string(out.cluster_ids[i]) +
                              " and " + std::to_string(out.cluster_ids[j]) + " share a centroid)");
        ratio = 0.0;
      } else {
        ratio = num / sep;
      }
      worst = std::max(worst, ratio);
    }
    out.per_cluster_worst_ratio[i] = worst;
    total += worst;
  }
  out.dbi = total / static_cast<double>(k);
  return out;
}

PurityScore class_based_purity(const ReducedReps& x, std::span<const std::uint32_t> class_labels, Scatter scatter) {
  std::vector<std::uint32_t> labels;
  if (!x.kept_rows.empty() && class_labels.size() == x.source_rows()) {
    labels.reserve(x.kept_rows.size());
    for (auto r : x.kept_rows) labels.push_back(class_labels[r]);
  } else if (class_labels.size() == x.matrix.rows) {
    labels.assign(class_labels.begin(), class_labels.end());
  } else {
    throw InvalidArgument("class_based_purity: " + std::to_string(class_labels.size()) +
                          " labels match neither the source rows nor the kept rows");
  }
  return dbi(x.matrix, labels, PurityMode::class_based, scatter);
}

}  // namespace repscope::cluster
