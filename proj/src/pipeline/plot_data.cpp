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

#include "repscope/pipeline/plot_data.hpp"

#include <map>
#include <utility>

#include "repscope/common/error.hpp"

namespace repscope::pipeline {
namespace {

const char* metric_of(FigureKind k) {
  switch (k) {
    case FigureKind::channel_sparsity: return kChannelSparsity;
    case FigureKind::layer_sparsity: return kLayerSparsity;
    case FigureKind::class_dbi: return kClassDbi;
    case FigureKind::optimal_k: return kOptimalK;
    case FigureKind::agnostic_dbi: return kAgnosticDbi;
  }
  return "";
}

std::string cells(const AggregateEntry* e) {
  if (!e) return ",";
  return format_number(e->mean) + "," + format_number(e->std);
}

}  // namespace

const char* to_string(FigureKind k) noexcept { return metric_of(k); }

FigureKind figure_kind_from_string(const std::string& s) {
  for (FigureKind k : all_figure_kinds())
    if (s == to_string(k)) return k;
  throw InvalidArgument("unknown figure kind '" + s + "'");
}

const std::vector<FigureKind>& all_figure_kinds() {
  static const std::vector<FigureKind> kinds = {FigureKind::channel_sparsity, FigureKind::layer_sparsity,
                                                FigureKind::class_dbi, FigureKind::optimal_k,
                                                FigureKind::agnostic_dbi};
  return kinds;
}

std::string plot_data_csv(const AggregateReport& agg, FigureKind kind) {
  const std::string metric = metric_of(kind);
  const bool by_channel = kind == FigureKind::channel_sparsity;
  std::map<std::pair<std::size_t, long>, std::pair<const AggregateEntry*, const AggregateEntry*>> rows;
  for (const auto& e : agg.entries) {
    if (e.metric != metric) continue;
    auto& slot = rows[{e.layer, e.channel}];
    (e.variant == "bn" ? slot.first : slot.second) = &e;
  }
  std::string out = by_channel ? "layer,channel,bn_mean,bn_std,nbn_mean,nbn_std\n"
                               : "layer,bn_mean,bn_std,nbn_mean,nbn_std\n";
  for (const auto& [key, pair] : rows) {
    out += std::to_string(key.first) + ",";
    if (by_channel) out += std::to_string(key.second) + ",";
    out += cells(pair.first) + "," + cells(pair.second) + "\n";
  }
  return out;
}

std::filesystem::path emit_plot_data(const AggregateReport& agg, FigureKind kind, const std::filesystem::path& dir) {
  const auto path = dir / (std::string(to_string(kind)) + ".csv");
  write_text(path, plot_data_csv(agg, kind));
  return path;
}

}  // namespace repscope::pipeline
