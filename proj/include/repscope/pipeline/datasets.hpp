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

#include <cstdint>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "repscope/nn/layer_spec.hpp"
#include "repscope/pipeline/config.hpp"
#include "repscope/tensor/tensor.hpp"

namespace repscope::pipeline {

struct DataSplits {
  LabeledDataset train;
  std::optional<LabeledDataset> validation;
  LabeledDataset test;
  nlohmann::json provenance;  // files, pool sizes, split seed, preprocessing
};

/// $REPSCOPE_DATA_DIR when set, otherwise ./data.
std::filesystem::path data_root();

/// Seeded train / validation / test splits for an experiment. The train
/// and validation subsets are disjoint draws from the training pool; the
/// test subset comes from the held-out pool. Throws DataError when files are
/// missing and ConfigError when the requested sizes exceed the pools.
DataSplits load_splits(const ExperimentConfig& config, const std::filesystem::path& root = data_root());

/// `n` images of `shape` from `classes` prototypes (uniform pixels drawn
/// from the seed), each sample its class prototype plus N(0, noise^2) pixel
/// noise clipped to [0, 1]. Labels cycle through the classes.
LabeledDataset make_synthetic_blobs(std::size_t n, std::size_t classes, const nn::ActShape& shape, double noise,
                                    std::uint64_t prototype_seed, std::uint64_t sample_seed);

}  // namespace repscope::pipeline
