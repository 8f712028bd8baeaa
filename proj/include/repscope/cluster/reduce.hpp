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

#include <vector>

#include "repscope/tensor/tensor.hpp"

namespace repscope::cluster {

/// Representations ready for clustering: spatially averaged, L2-normalized
/// rows with all-zero rows removed.
struct ReducedReps {
  RepMatrix matrix;
  std::size_t layer_index = 0;
  bool norm_applied = false;
  std::vector<std::size_t> dropped_rows;  // source rows with zero norm
  std::vector<std::size_t> kept_rows;     // source row of each matrix row

  std::size_t source_rows() const noexcept { return kept_rows.size() + dropped_rows.size(); }
};

/// (N, C) matrix of per-feature-map means over H x W.
RepMatrix spatial_average(const ActTensor4& t);

/// Mean of each of the `channels` maps of one sample laid out (C, spatial).
template <class T>
void spatial_average_row(const T* sample, std::size_t channels, std::size_t spatial, double* out);

/// Divides every non-zero row by its Euclidean norm and drops zero rows.
/// Throws InvalidArgument on negative or non-finite entries and
/// AnalysisError("no usable representations") when every row is zero.
ReducedReps normalize_rows(const RepMatrix& m, std::size_t layer_index = 0);

}  // namespace repscope::cluster
