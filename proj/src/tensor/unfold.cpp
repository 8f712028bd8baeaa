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

#include "repscope/tensor/unfold.hpp"

#include <algorithm>

#include "repscope/common/error.hpp"

namespace repscope {

RepMatrix unfold_channel(const ActTensor4& t) {
  const auto& d = t.dims();
  const std::size_t hw = d.spatial();
  RepMatrix m{d.c, d.n * hw, std::vector<double>(t.size()), AxisTag::by_channel};
  auto src = t.data();
  for (std::size_t n = 0; n < d.n; ++n)
    for (std::size_t c = 0; c < d.c; ++c)
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>((n * d.c + c) * hw), hw,
                  m.data.begin() + static_cast<std::ptrdiff_t>(c * m.cols + n * hw));
  return m;
}

RepMatrix unfold_sample(const ActTensor4& t) {
  const auto& d = t.dims();
  auto src = t.data();
  return RepMatrix{d.n, d.per_sample(), std::vector<double>(src.begin(), src.end()), AxisTag::by_sample};
}

RepMatrix flatten(const ActTensor4& t) {
  auto src = t.data();
  return RepMatrix{1, t.size(), std::vector<double>(src.begin(), src.end()), AxisTag::flat};
}

ActTensor4 refold_channel(const RepMatrix& m, Dims4 d, SourceTag tag) {
  const std::size_t hw = d.spatial();
  if (m.rows != d.c || m.cols != d.n * hw || m.data.size() != d.count())
    throw ShapeError("refold_channel: matrix shape does not match dims " + to_string(d));
  std::vector<double> out(d.count());
  for (std::size_t n = 0; n < d.n; ++n)
    for (std::size_t c = 0; c < d.c; ++c)
      std::copy_n(m.data.begin() + static_cast<std::ptrdiff_t>(c * m.cols + n * hw), hw,
                  out.begin() + static_cast<std::ptrdiff_t>((n * d.c + c) * hw));
  return ActTensor4(d, std::move(out), tag);
}

ActTensor4 refold_sample(const RepMatrix& m, Dims4 d, SourceTag tag) {
  if (m.rows != d.n || m.cols != d.per_sample() || m.data.size() != d.count())
    throw ShapeError("refold_sample: matrix shape does not match dims " + to_string(d));
  return ActTensor4(d, m.data, tag);
}

}  // namespace repscope
