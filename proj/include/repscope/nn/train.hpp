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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "repscope/nn/network.hpp"
#include "repscope/tensor/tensor.hpp"

namespace repscope::nn {

enum class StopRule { interpolation, early_stopping };
enum class OptimizerKind { sgd_nesterov, adam };

struct TrainConfig {
  std::size_t batch_size = 64;
  double learning_rate = 0.01;
  double lr_decay_factor = 0.99;
  std::size_t lr_decay_every_n_epochs = 10;
  double nesterov_momentum = 0.99;
  std::size_t max_epochs = 200;
  StopRule stop_rule = StopRule::interpolation;
  /// Early stopping patience as a fraction of max_epochs (at least 1 epoch).
  double patience_fraction = 0.2;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::sgd_nesterov;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Batch size of eval-mode passes (accuracy checks); does not affect results.
  std::size_t eval_batch_size = 256;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  std::size_t patience_epochs() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
/// Missing keys keep their defaults; unknown keys raise ConfigError.
void from_json(const nlohmann::json& j, TrainConfig& c);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double train_loss = 0.0;              // mean over the epoch's mini-batches
  double running_accuracy = 0.0;        // train-mode accuracy while training
  double train_accuracy = -1.0;         // eval-mode accuracy on the full train split; -1 if not measured
  double val_loss = -1.0;               // -1 when no validation split
  double val_accuracy = -1.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::string stop_reason;  // "interpolation", "early_stopping" or "max_epochs"
  std::size_t best_epoch = 0;
};

void to_json(nlohmann::json& j, const EpochRecord& r);
void from_json(const nlohmann::json& j, EpochRecord& r);
void to_json(nlohmann::json& j, const TrainHistory& h);
void from_json(const nlohmann::json& j, TrainHistory& h);

struct TrainedModel {
  NetworkSpec spec;
  Network<float> network;
  TrainHistory history;
  TrainConfig config;
  std::uint64_t seed = 0;
  double train_accuracy = -1.0;
  double val_accuracy = -1.0;
  double test_accuracy = -1.0;

  explicit TrainedModel(NetworkSpec s) : spec(s), network(std::move(s)) {}
};

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Copies the listed samples of `images` into an (n, C, H, W) blob.
template <class T>
void load_batch(const ActTensor4& images, std::span<const std::size_t> indices, Blob<T>& out);

/// Eval-mode loss and accuracy over a whole dataset.
EvalResult evaluate(Network<float>& net, const LabeledDataset& data, std::size_t batch_size = 256);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch training with per-epoch seeded shuffling. A trailing batch of
/// a single sample is merged into the previous batch (train-mode BatchNorm
/// needs two samples). Stops at interpolation (eval-mode 100% train
/// accuracy), on early stopping (validation loss; best weights restored) or
/// at max_epochs. Throws DivergenceError on a non-finite loss.
TrainedModel train(const NetworkSpec& spec, const LabeledDataset& train_set, const LabeledDataset* val_set,
                   const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace repscope::nn
