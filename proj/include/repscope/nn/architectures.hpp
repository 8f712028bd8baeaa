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

#include "repscope/nn/layer_spec.hpp"

namespace repscope::nn {

/// Four 3x3 convolutions with 16/32/64/128 channels (no padding), 2x2/2 max
/// pooling after the second and third, then a 100-unit hidden dense layer
/// and the logits. With `batchnorm`, a BatchNorm sits between every hidden
/// linear map and its ReLU, including the dense one.
NetworkSpec build_standard_cnn(bool batchnorm, ActShape input = {1, 28, 28, false}, std::size_t classes = 10);

/// VGG-16 feature extractor: 13 3x3 convolutions (padding 1) with channels
/// 64,64,128,128,256,256,256,512,512,512,512,512,512, 2x2/2 max pooling after
/// convolutions 2, 4, 7, 10 and 13, followed by a single dense classifier.
NetworkSpec build_vgg16(bool batchnorm, ActShape input = {3, 32, 32, false}, std::size_t classes = 10);

/// Channel plan of build_vgg16.
inline constexpr std::size_t kVgg16Channels[13] = {64, 64, 128, 128, 256, 256, 256, 512, 512, 512, 512, 512, 512};

}  // namespace repscope::nn
