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

#include <filesystem>
#include <string>
#include <vector>

#include "repscope/pipeline/report.hpp"

namespace repscope::pipeline {

enum class FigureKind { channel_sparsity, layer_sparsity, class_dbi, optimal_k, agnostic_dbi };

const char* to_string(FigureKind k) noexcept;
/// Throws InvalidArgument for an unknown name.
FigureKind figure_kind_from_string(const std::string& s);
const std::vector<FigureKind>& all_figure_kinds();

/// Columnar plot data for one figure: layer[,channel],bn_mean,bn_std,
/// nbn_mean,nbn_std with one row per layer (per channel for
/// channel_sparsity). A variant without data leaves its columns empty.
std::string plot_data_csv(const AggregateReport& agg, FigureKind kind);

/// Writes `dir/<kind>.csv` and returns its path.
std::filesystem::path emit_plot_data(const AggregateReport& agg, FigureKind kind, const std::filesystem::path& dir);

}  // namespace repscope::pipeline
