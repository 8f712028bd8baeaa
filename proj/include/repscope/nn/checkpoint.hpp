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

#include <json.hpp>

#include "repscope/nn/train.hpp"

namespace repscope::nn {

/// Writes `dir/manifest.json` (spec, seed, config, history, accuracies and
/// the tensor list) plus one 32-bit ARTN file per parameter and BatchNorm
/// buffer. `extra` is stored verbatim under "extra".
void save_checkpoint(TrainedModel& model, const std::filesystem::path& dir, const nlohmann::json& extra = {});

/// Inverse of save_checkpoint. Throws DataError on missing files or shape
/// mismatches between the manifest, the spec and the tensor files.
TrainedModel load_checkpoint(const std::filesystem::path& dir);

/// The "extra" object of a checkpoint manifest (null when absent).
nlohmann::json checkpoint_extra(const std::filesystem::path& dir);

}  // namespace repscope::nn
