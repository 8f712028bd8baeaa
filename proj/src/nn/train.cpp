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

#include "repscope/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/nn/optimizer.hpp"

namespace repscope::nn {

// ---------------------------------------------------------------------------
// Config

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("train: learning_rate must be > 0");
  if (!(lr_decay_factor > 0.0) || lr_decay_factor > 1.0) throw ConfigError("train: lr_decay_factor must be in (0, 1]");
  if (lr_decay_every_n_epochs < 1) throw ConfigError("train: lr_decay_every_n_epochs must be >= 1");
  if (!(nesterov_momentum >= 0.0 && nesterov_momentum < 1.0)) throw ConfigError("train: nesterov_momentum must be in [0, 1)");
  if (max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
  if (!(patience_fraction > 0.0 && patience_fraction <= 1.0)) throw ConfigError("train: patience_fraction must be in (0, 1]");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
    throw ConfigError("train: adam betas must be in [0, 1)");
  if (!(adam_eps > 0.0)) throw ConfigError("train: adam eps must be > 0");
  if (eval_batch_size < 1) throw ConfigError("train: eval_batch_size must be >= 1");
}

std::size_t TrainConfig::patience_epochs() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(patience_fraction * static_cast<double>(max_epochs))));
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"batch_size", c.batch_size},
                     {"learning_rate", c.learning_rate},
                     {"lr_decay_factor", c.lr_decay_factor},
                     {"lr_decay_every_n_epochs", c.lr_decay_every_n_epochs},
                     {"nesterov_momentum", c.nesterov_momentum},
                     {"max_epochs", c.max_epochs},
                     {"stop_rule", c.stop_rule == StopRule::interpolation ? "interpolation" : "early_stopping"},
                     {"patience_fraction", c.patience_fraction},
                     {"seed", c.seed},
                     {"optimizer", c.optimizer == OptimizerKind::sgd_nesterov ? "sgd_nesterov" : "adam"},
                     {"adam", {{"beta1", c.adam_beta1}, {"beta2", c.adam_beta2}, {"eps", c.adam_eps}}},
                     {"eval_batch_size", c.eval_batch_size}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  static const std::set<std::string> known = {"batch_size", "learning_rate", "lr_decay_factor",
                                              "lr_decay_every_n_epochs", "nesterov_momentum", "max_epochs",
                                              "stop_rule", "patience_fraction", "seed", "optimizer", "adam",
                                              "eval_batch_size"};
  if (!j.is_object()) throw ConfigError("train config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("train config: unknown key '" + key + "'");
  try {
    c = TrainConfig{};
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("lr_decay_factor")) c.lr_decay_factor = j.at("lr_decay_factor").get<double>();
    if (j.contains("lr_decay_every_n_epochs")) c.lr_decay_every_n_epochs = j.at("lr_decay_every_n_epochs").get<std::size_t>();
    if (j.contains("nesterov_momentum")) c.nesterov_momentum = j.at("nesterov_momentum").get<double>();
    if (j.contains("max_epochs")) c.max_epochs = j.at("max_epochs").get<std::size_t>();
    if (j.contains("stop_rule")) {
      const auto s = j.at("stop_rule").get<std::string>();
      if (s == "interpolation")
        c.stop_rule = StopRule::interpolation;
      else if (s == "early_stopping")
        c.stop_rule = StopRule::early_stopping;
      else
        throw ConfigError("train config: unknown stop_rule '" + s + "'");
    }
    if (j.contains("patience_fraction")) c.patience_fraction = j.at("patience_fraction").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("optimizer")) {
      const auto s = j.at("optimizer").get<std::string>();
      if (s == "sgd_nesterov")
        c.optimizer = OptimizerKind::sgd_nesterov;
      else if (s == "adam")
        c.optimizer = OptimizerKind::adam;
      else
        throw ConfigError("train config: unknown optimizer '" + s + "'");
    }
    if (j.contains("adam")) {
      const auto& a = j.at("adam");
      c.adam_beta1 = a.value("beta1", c.adam_beta1);
      c.adam_beta2 = a.value("beta2", c.adam_beta2);
      c.adam_eps = a.value("eps", c.adam_eps);
    }
    if (j.contains("eval_batch_size")) c.eval_batch_size = j.at("eval_batch_size").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const EpochRecord& r) {
  j = nlohmann::json{{"epoch", r.epoch},           {"learning_rate", r.learning_rate},
                     {"train_loss", r.train_loss}, {"running_accuracy", r.running_accuracy},
                     {"train_accuracy", r.train_accuracy}, {"val_loss", r.val_loss},
                     {"val_accuracy", r.val_accuracy}};
}

void from_json(const nlohmann::json& j, EpochRecord& r) {
  j.at("epoch").get_to(r.epoch);
  j.at("learning_rate").get_to(r.learning_rate);
  j.at("train_loss").get_to(r.train_loss);
  j.at("running_accuracy").get_to(r.running_accuracy);
  j.at("train_accuracy").get_to(r.train_accuracy);
  j.at("val_loss").get_to(r.val_loss);
  j.at("val_accuracy").get_to(r.val_accuracy);
}

void to_json(nlohmann::json& j, const TrainHistory& h) {
  j = nlohmann::json{{"epochs", h.epochs}, {"stop_reason", h.stop_reason}, {"best_epoch", h.best_epoch}};
}

void from_json(const nlohmann::json& j, TrainHistory& h) {
  j.at("epochs").get_to(h.epochs);
  j.at("stop_reason").get_to(h.stop_reason);
  j.at("best_epoch").get_to(h.best_epoch);
}

// ---------------------------------------------------------------------------
// Batching and evaluation

template <class T>
void load_batch(const ActTensor4& images, std::span<const std::size_t> indices, Blob<T>& out) {
  const Dims4& d = images.dims();
  out.resize({indices.size(), d.c, d.h, d.w});
  const std::size_t per = d.per_sample();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= d.n) throw InvalidArgument("load_batch: sample index out of range");
    const auto src = images.sample(indices[i]);
    T* dst = out.data.data() + i * per;
    for (std::size_t j = 0; j < per; ++j) dst[j] = static_cast<T>(src[j]);
  }
}

template void load_batch<float>(const ActTensor4&, std::span<const std::size_t>, Blob<float>&);
template void load_batch<double>(const ActTensor4&, std::span<const std::size_t>, Blob<double>&);

EvalResult evaluate(Network<float>& net, const LabeledDataset& data, std::size_t batch_size) {
  const std::size_t n = data.size();
  if (n == 0) throw InvalidArgument("evaluate: empty dataset");
  if (batch_size == 0) throw InvalidArgument("evaluate: batch_size must be >= 1");
  Blob<float> batch;
  std::vector<std::size_t> idx;
  double loss_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t begin = 0; begin < n; begin += batch_size) {
    const std::size_t end = std::min(n, begin + batch_size);
    idx.resize(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    load_batch(data.images, idx, batch);
    const auto& logits = net.forward(batch, Mode::eval);
    std::size_t correct = 0;
    const double loss = softmax_cross_entropy(
        logits, std::span<const std::uint32_t>(data.labels).subspan(begin, end - begin), static_cast<Blob<float>*>(nullptr),
        &correct);
    loss_sum += loss * static_cast<double>(end - begin);
    hits += correct;
  }
  return {loss_sum / static_cast<double>(n), static_cast<double>(hits) / static_cast<double>(n)};
}

// ---------------------------------------------------------------------------
// Training loop

namespace {

std::vector<std::vector<float>> snapshot(Network<float>& net) {
  std::vector<std::vector<float>> out;
  for (auto& p : net.params()) out.push_back(*p.value);
  for (auto& b : net.buffers()) out.push_back(*b.value);
  return out;
}

void restore(Network<float>& net, const std::vector<std::vector<float>>& snap) {
  std::size_t i = 0;
  for (auto& p : net.params()) *p.value = snap.at(i++);
  for (auto& b : net.buffers()) *b.value = snap.at(i++);
}

}  // namespace

TrainedModel train(const NetworkSpec& spec, const LabeledDataset& train_set, const LabeledDataset* val_set,
                   const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  train_set.validate();
  if (train_set.size() < 2) throw InvalidArgument("train: need at least 2 training samples");
  if (train_set.class_count != spec.classes)
    throw InvalidArgument("train: dataset has " + std::to_string(train_set.class_count) + " classes, network emits " +
                          std::to_string(spec.classes));
  if (config.stop_rule == StopRule::early_stopping && (!val_set || val_set->size() == 0))
    throw ConfigError("train: early stopping needs a validation split");

  TrainedModel model(spec);
  model.config = config;
  model.seed = config.seed;
  auto& net = model.network;
  net.init_he_uniform(config.seed);

  std::unique_ptr<Optimizer<float>> opt;
  if (config.optimizer == OptimizerKind::sgd_nesterov)
    opt = std::make_unique<SgdNesterov<float>>(config.nesterov_momentum);
  else
    opt = std::make_unique<Adam<float>>(config.adam_beta1, config.adam_beta2, config.adam_eps);
  const auto params = net.params();

  Rng shuffle_rng(derive_seed(config.seed, "shuffle"));
  const std::size_t n = train_set.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  // Batch boundaries are fixed across epochs; a trailing singleton joins the previous batch.
  std::vector<std::size_t> bounds;
  for (std::size_t b = 0; b < n; b += config.batch_size) bounds.push_back(b);
  bounds.push_back(n);
  if (bounds.size() > 2 && bounds[bounds.size() - 1] - bounds[bounds.size() - 2] == 1)
    bounds.erase(bounds.end() - 2);

  Blob<float> batch, grad;
  std::vector<std::uint32_t> labels;
  double lr = config.learning_rate;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  std::vector<std::vector<float>> best_snapshot;
  auto& hist = model.history;
  hist.stop_reason = "max_epochs";

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    if (epoch > 1 && (epoch - 1) % config.lr_decay_every_n_epochs == 0) lr *= config.lr_decay_factor;
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    double loss_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      const std::span<const std::size_t> idx(order.data() + bounds[b], bounds[b + 1] - bounds[b]);
      load_batch(train_set.images, idx, batch);
      labels.resize(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = train_set.labels[idx[i]];

      const auto& logits = net.forward(batch, Mode::train);
      std::size_t correct = 0;
      const double loss = softmax_cross_entropy<float>(logits, labels, &grad, &correct);
      if (!std::isfinite(loss))
        throw DivergenceError(epoch, "training diverged: non-finite loss in epoch " + std::to_string(epoch));
      net.zero_grad();
      net.backward(grad);
      opt->step(params, lr);
      loss_sum += loss * static_cast<double>(idx.size());
      hits += correct;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.learning_rate = lr;
    rec.train_loss = loss_sum / static_cast<double>(n);
    rec.running_accuracy = static_cast<double>(hits) / static_cast<double>(n);
    if (val_set && val_set->size() > 0) {
      const auto v = evaluate(net, *val_set, config.eval_batch_size);
      rec.val_loss = v.loss;
      rec.val_accuracy = v.accuracy;
    }
    bool stop = false;
    if (config.stop_rule == StopRule::interpolation) {
      // A full eval-mode pass is only worth paying for once training is close.
      if (rec.running_accuracy >= 0.99) {
        const auto t = evaluate(net, train_set, config.eval_batch_size);
        rec.train_accuracy = t.accuracy;
        if (t.accuracy >= 1.0) {
          hist.stop_reason = "interpolation";
          stop = true;
        }
      }
      hist.best_epoch = epoch;
    } else {
      if (rec.val_loss < best_val) {
        best_val = rec.val_loss;
        since_best = 0;
        hist.best_epoch = epoch;
        best_snapshot = snapshot(net);
      } else if (++since_best >= config.patience_epochs()) {
        hist.stop_reason = "early_stopping";
        stop = true;
      }
    }
    hist.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (stop) break;
  }

  if (config.stop_rule == StopRule::early_stopping && !best_snapshot.empty()) restore(net, best_snapshot);
  model.train_accuracy = evaluate(net, train_set, config.eval_batch_size).accuracy;
  if (val_set && val_set->size() > 0) model.val_accuracy = evaluate(net, *val_set, config.eval_batch_size).accuracy;
  return model;
}

}  // namespace repscope::nn
