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

#include "repscope/tensor/tensor.hpp"

namespace repscope {

/// C x (N*H*W): row c holds channel c of every sample, sample-major then
/// spatial order.
RepMatrix unfold_channel(const ActTensor4& t);

/// N x (C*H*W): row n is sample n in (c, h, w) order.
RepMatrix unfold_sample(const ActTensor4& t);

/// 1 x (N*C*H*W) in storage order.
RepMatrix flatten(const ActTensor4& t);

/// Inverses of the unfoldings above.
ActTensor4 refold_channel(const RepMatrix& m, Dims4 dims, SourceTag tag = SourceTag::raw);
ActTensor4 refold_sample(const RepMatrix& m, Dims4 dims, SourceTag tag = SourceTag::raw);

}  // namespace repscope
