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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "repscope/cluster/sweep.hpp"
#include "repscope/nn/layer_spec.hpp"
#include "repscope/nn/train.hpp"

namespace repscope::pipeline {

enum class DatasetKind { mnist, cifar10, synthetic_blobs };
enum class Architecture { standard_cnn, vgg16 };
enum class Variant { bn, nbn };

const char* to_string(DatasetKind d) noexcept;
const char* to_string(Architecture a) noexcept;
const char* to_string(Variant v) noexcept;
Variant variant_from_string(const std::string& s);

struct DataConfig {
  std::size_t train_samples = 4000;
  /// Drawn from the training pool outside the train subset; default 10% of
  /// train_samples.
  std::optional<std::size_t> validation_samples;
  std::size_t test_samples = 1000;

  std::size_t validation_count() const noexcept { return validation_samples.value_or(train_samples / 10); }
};

/// Parameters of the synthetic_blobs dataset: every class is a fixed random
/// prototype image plus independent Gaussian pixel noise, clipped to [0, 1].
struct SyntheticConfig {
  std::size_t classes = 3;
  double noise = 0.1;
  std::size_t pool_samples = 0;  // 0: exactly train + validation
};

struct ExperimentConfig {
  std::string run_id;
  DatasetKind dataset = DatasetKind::mnist;
  Architecture architecture = Architecture::standard_cnn;
  std::vector<Variant> variants{Variant::bn, Variant::nbn};
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 0;
  DataConfig data;
  SyntheticConfig synthetic;
  std::map<Variant, nn::TrainConfig> train;
  std::size_t sparsity_sample_count = 5000;
  std::size_t clustering_sample_count = 15000;
  std::vector<std::size_t> analyzed_layers;  // 1-based hidden layers; empty = all
  cluster::SweepOptions clustering;
  double sparsity_tau = 0.0;
  std::size_t extract_batch_size = 256;
  std::filesystem::path output_dir = "runs";

  /// Throws ConfigError on any inconsistency that can be checked without data.
  void validate() const;
  /// Canonical JSON (object keys sorted); round-trips through from_json.
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  /// 16 hex digits of FNV-1a over the canonical JSON minus output_dir.
  std::string hash() const;

  nn::NetworkSpec network(Variant v) const;
  std::size_t hidden_layer_count() const;
  /// analyzed_layers, or every hidden layer when unset.
  std::vector<std::size_t> layers() const;
  /// Hidden layers below this number are flagged unstable in reports.
  std::size_t unstable_below() const noexcept { return architecture == Architecture::vgg16 ? 6 : 0; }

  /// Stream seeds of one (variant, seed) run.
  std::uint64_t train_seed(Variant v, std::uint64_t seed) const;
  std::uint64_t sparsity_seed(Variant v, std::uint64_t seed) const;
  std::uint64_t clustering_seed(Variant v, std::uint64_t seed) const;
  /// Identity of a trained model: everything that influences its weights.
  std::string model_hash(Variant v, std::uint64_t seed) const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace repscope::pipeline
