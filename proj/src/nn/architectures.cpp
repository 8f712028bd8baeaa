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

#include "repscope/nn/architectures.hpp"

namespace repscope::nn {
namespace {

void push_hidden(NetworkSpec& s, LayerSpec linear, bool batchnorm) {
  const std::size_t width = linear.kind == LayerKind::dense ? linear.out_features : linear.out_channels;
  s.layers.push_back(linear);
  if (batchnorm) s.layers.push_back(LayerSpec::batchnorm(width));
  s.layers.push_back(LayerSpec::relu());
}

}  // namespace

NetworkSpec build_standard_cnn(bool batchnorm, ActShape input, std::size_t classes) {
  NetworkSpec s;
  s.name = batchnorm ? "standard_cnn_bn" : "standard_cnn";
  s.input = input;
  s.classes = classes;
  constexpr std::size_t channels[4] = {16, 32, 64, 128};
  std::size_t in = input.c;
  for (std::size_t i = 0; i < 4; ++i) {
    push_hidden(s, LayerSpec::conv2d(in, channels[i], 3, 1, 0), batchnorm);
    if (i == 1 || i == 2) s.layers.push_back(LayerSpec::maxpool2d(2, 2));
    in = channels[i];
  }
  s.layers.push_back(LayerSpec::flatten());
  const std::size_t flat = trace_shapes(input, s.layers, s.name).back().count();
  push_hidden(s, LayerSpec::dense(flat, 100), batchnorm);
  s.layers.push_back(LayerSpec::dense(100, classes));
  s.shapes();
  return s;
}

NetworkSpec build_vgg16(bool batchnorm, ActShape input, std::size_t classes) {
  NetworkSpec s;
  s.name = batchnorm ? "vgg16_bn" : "vgg16";
  s.input = input;
  s.classes = classes;
  std::size_t in = input.c;
  for (std::size_t i = 0; i < 13; ++i) {
    push_hidden(s, LayerSpec::conv2d(in, kVgg16Channels[i], 3, 1, 1), batchnorm);
    in = kVgg16Channels[i];
    const std::size_t conv_no = i + 1;
    if (conv_no == 2 || conv_no == 4 || conv_no == 7 || conv_no == 10 || conv_no == 13)
      s.layers.push_back(LayerSpec::maxpool2d(2, 2));
  }
  s.layers.push_back(LayerSpec::flatten());
  s.layers.push_back(LayerSpec::dense(trace_shapes(input, s.layers, s.name).back().count(), classes));
  s.shapes();
  return s;
}

}  // namespace repscope::nn
