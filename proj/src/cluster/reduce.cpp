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

#include "repscope/cluster/reduce.hpp"

#include <cmath>

#include "repscope/common/error.hpp"

namespace repscope::cluster {

template <class T>
void spatial_average_row(const T* sample, std::size_t channels, std::size_t spatial, double* out) {
  for (std::size_t c = 0; c < channels; ++c) {
    double sum = 0.0;
    const T* p = sample + c * spatial;
    for (std::size_t i = 0; i < spatial; ++i) sum += static_cast<double>(p[i]);
    out[c] = sum / static_cast<double>(spatial);
  }
}

template void spatial_average_row<float>(const float*, std::size_t, std::size_t, double*);
template void spatial_average_row<double>(const double*, std::size_t, std::size_t, double*);

RepMatrix spatial_average(const ActTensor4& t) {
  const Dims4& d = t.dims();
  RepMatrix m{d.n, d.c, std::vector<double>(d.n * d.c), AxisTag::spatial_mean};
  for (std::size_t n = 0; n < d.n; ++n) spatial_average_row(t.sample(n).data(), d.c, d.spatial(), &m.data[n * d.c]);
  return m;
}

ReducedReps normalize_rows(const RepMatrix& m, std::size_t layer_index) {
  m.validate();
  ReducedReps r;
  r.layer_index = layer_index;
  r.norm_applied = true;
  r.matrix.cols = m.cols;
  r.matrix.axis = m.axis;
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto row = m.row(i);
    double sq = 0.0;
    for (double v : row) {
      if (v < 0.0) throw InvalidArgument("normalize_rows: negative entry in row " + std::to_string(i));
      sq += v * v;
    }
    if (sq == 0.0) {
      r.dropped_rows.push_back(i);
      continue;
    }
    const double norm = std::sqrt(sq);
    for (double v : row) r.matrix.data.push_back(v / norm);
    r.kept_rows.push_back(i);
  }
  r.matrix.rows = r.kept_rows.size();
  if (r.matrix.rows == 0) throw AnalysisError("no usable representations: every row is zero");
  return r;
}

}  // namespace repscope::cluster
