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
#include <memory>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "repscope/nn/train.hpp"
#include "repscope/pipeline/config.hpp"
#include "repscope/pipeline/datasets.hpp"
#include "repscope/pipeline/report.hpp"

namespace repscope::pipeline {

/// Restricts the (variant, seed) run matrix.
struct RunFilter {
  std::optional<Variant> variant;
  std::optional<std::uint64_t> seed;
};

/// Orchestrates one experiment under `output_dir/run_id`:
///   checkpoints/<variant>_seed<seed>/   trained models (reused when the
///                                       model hash matches)
///   accuracy.csv, sparsity.csv, clustering.csv, dbi_by_k.csv
///   aggregate.csv, plots/<figure>.csv   seed aggregates and plot data
///   manifest.json                       config, hashes, provenance, timing
/// Every file except manifest.json is a deterministic function of the
/// config. A diverging run is recorded and skipped; see diverged().
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config, RunFilter filter = {}, std::ostream* log = nullptr);

  const ExperimentConfig& config() const noexcept { return config_; }
  std::filesystem::path run_dir() const { return config_.output_dir / config_.run_id; }
  std::vector<std::pair<Variant, std::uint64_t>> runs() const;

  void train();
  void extract();
  void sparsity();
  void cluster();
  void report();
  void run_all();

  bool diverged() const noexcept { return !diverged_.empty(); }
  /// Trained (or loaded) model of one run; null when it diverged.
  nn::TrainedModel* model(Variant v, std::uint64_t seed);
  const DataSplits& data();
  /// Per-run metadata recorded in manifest.json (model hash, checkpoint
  /// status, training wall-clock seconds).
  const nlohmann::json& run_meta() const noexcept { return run_meta_; }

 private:
  void log(const std::string& line);
  void write_manifest();

  ExperimentConfig config_;
  RunFilter filter_;
  std::ostream* log_;
  std::optional<DataSplits> data_;
  std::map<std::pair<Variant, std::uint64_t>, std::unique_ptr<nn::TrainedModel>> models_;
  std::map<std::pair<Variant, std::uint64_t>, std::size_t> diverged_;  // epoch of divergence
  nlohmann::json run_meta_ = nlohmann::json::object();
  nlohmann::json stage_meta_ = nlohmann::json::object();
};

}  // namespace repscope::pipeline
