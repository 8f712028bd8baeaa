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

#include "repscope/pipeline/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>

#include "repscope/cluster/analysis.hpp"
#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/io/formats.hpp"
#include "repscope/nn/checkpoint.hpp"
#include "repscope/nn/extract.hpp"
#include "repscope/pipeline/plot_data.hpp"
#include "repscope/simd/kernels.hpp"
#include "repscope/sparsity/sparsity.hpp"

namespace repscope::pipeline {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string run_name(Variant v, std::uint64_t seed) { return std::string(to_string(v)) + "_seed" + std::to_string(seed); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

Experiment::Experiment(ExperimentConfig config, RunFilter filter, std::ostream* log)
    : config_(std::move(config)), filter_(filter), log_(log) {
  config_.validate();
  if (filter_.variant &&
      std::find(config_.variants.begin(), config_.variants.end(), *filter_.variant) == config_.variants.end())
    throw ConfigError(std::string("variant ") + to_string(*filter_.variant) + " is not part of the config");
  if (filter_.seed && std::find(config_.seeds.begin(), config_.seeds.end(), *filter_.seed) == config_.seeds.end())
    throw ConfigError("seed " + std::to_string(*filter_.seed) + " is not part of the config");
}

std::vector<std::pair<Variant, std::uint64_t>> Experiment::runs() const {
  std::vector<std::pair<Variant, std::uint64_t>> out;
  for (Variant v : config_.variants) {
    if (filter_.variant && *filter_.variant != v) continue;
    for (std::uint64_t s : config_.seeds) {
      if (filter_.seed && *filter_.seed != s) continue;
      out.emplace_back(v, s);
    }
  }
  return out;
}

void Experiment::log(const std::string& line) {
  if (log_) *log_ << line << std::endl;
}

const DataSplits& Experiment::data() {
  if (!data_) {
    data_ = load_splits(config_);
    const auto& d = *data_;
    if (config_.sparsity_sample_count > d.train.size() || config_.clustering_sample_count > d.train.size())
      throw ConfigError("config: sample counts exceed the train split");
    log("data: " + std::to_string(d.train.size()) + " train, " +
        std::to_string(d.validation ? d.validation->size() : 0) + " validation, " + std::to_string(d.test.size()) +
        " test samples");
  }
  return *data_;
}

nn::TrainedModel* Experiment::model(Variant v, std::uint64_t seed) {
  const auto key = std::make_pair(v, seed);
  if (diverged_.count(key)) return nullptr;
  if (auto it = models_.find(key); it != models_.end()) return it->second.get();

  const std::string name = run_name(v, seed);
  const fs::path dir = run_dir() / "checkpoints" / name;
  const std::string hash = config_.model_hash(v, seed);
  auto& meta = run_meta_[name];
  meta["model_hash"] = hash;
  meta["train_seed"] = config_.train_seed(v, seed);

  if (fs::exists(dir / "manifest.json")) {
    try {
      const auto extra = nn::checkpoint_extra(dir);
      if (extra.is_object() && extra.value("model_hash", "") == hash) {
        auto m = std::make_unique<nn::TrainedModel>(nn::load_checkpoint(dir));
        log(name + ": reusing checkpoint " + dir.string());
        meta["checkpoint"] = "reused";
        if (extra.contains("train_seconds")) meta["train_seconds"] = extra["train_seconds"];
        return (models_[key] = std::move(m)).get();
      }
    } catch (const DataError& e) {
      log(name + ": ignoring unreadable checkpoint (" + std::string(e.what()) + ")");
    }
  }

  const auto& d = data();
  nn::TrainConfig tc = config_.train.at(v);
  tc.seed = config_.train_seed(v, seed);
  const auto t0 = Clock::now();
  log(name + ": training " + config_.network(v).name + " on " + std::to_string(d.train.size()) + " samples");
  try {
    auto trained = nn::train(config_.network(v), d.train, d.validation ? &*d.validation : nullptr, tc,
                             [&](const nn::EpochRecord& r) {
                               char buf[160];
                               std::snprintf(buf, sizeof buf, "%s: epoch %zu lr %.6g loss %.6f running_acc %.4f",
                                             name.c_str(), r.epoch, r.learning_rate, r.train_loss,
                                             r.running_accuracy);
                               std::string line = buf;
                               if (r.train_accuracy >= 0) line += " train_acc " + format_number(r.train_accuracy);
                               if (r.val_accuracy >= 0) line += " val_acc " + format_number(r.val_accuracy);
                               log(line);
                             });
    auto m = std::make_unique<nn::TrainedModel>(std::move(trained));
    m->test_accuracy = nn::evaluate(m->network, d.test, tc.eval_batch_size).accuracy;
    const double train_seconds = seconds_since(t0);
    nn::save_checkpoint(*m, dir,
                        {{"model_hash", hash}, {"variant", to_string(v)}, {"seed", seed}, {"train_seconds", train_seconds}});
    meta["checkpoint"] = "trained";
    meta["train_seconds"] = train_seconds;
    log(name + ": " + m->history.stop_reason + " after " + std::to_string(m->history.epochs.size()) +
        " epochs, train acc " + std::to_string(m->train_accuracy) + ", test acc " + std::to_string(m->test_accuracy));
    return (models_[key] = std::move(m)).get();
  } catch (const DivergenceError& e) {
    diverged_[key] = e.epoch();
    meta["checkpoint"] = "diverged";
    meta["diverged_epoch"] = e.epoch();
    log(name + ": " + e.what());
    return nullptr;
  }
}

void Experiment::train() {
  const auto t0 = Clock::now();
  std::vector<AccuracyRow> rows;
  for (auto [v, s] : runs()) {
    AccuracyRow row;
    row.variant = to_string(v);
    row.seed = s;
    if (auto* m = model(v, s)) {
      row.status = "ok";
      row.train_accuracy = m->train_accuracy;
      row.val_accuracy = m->val_accuracy;
      row.test_accuracy = m->test_accuracy;
      row.epochs = m->history.epochs.size();
      row.stop_reason = m->history.stop_reason;
    } else {
      row.status = "diverged";
      row.epochs = diverged_.at({v, s});
      row.stop_reason = "diverged";
    }
    rows.push_back(row);
  }
  write_text(run_dir() / "accuracy.csv", accuracy_csv(config_.run_id, rows));
  stage_meta_["train"] = {{"seconds", seconds_since(t0)}};
  write_manifest();
}

void Experiment::extract() {
  const auto t0 = Clock::now();
  const auto& d = data();
  const auto layers = config_.layers();
  for (auto [v, s] : runs()) {
    auto* m = model(v, s);
    if (!m) continue;
    const fs::path dir = run_dir() / "representations" / run_name(v, s);
    Rng rng(derive_seed(config_.sparsity_seed(v, s), "sparsity-sample"));
    const auto picked = rng.sample_without_replacement(d.train.size(), config_.sparsity_sample_count);
    const ActTensor4 images = d.train.images.gather(picked);
    nlohmann::json samples = nlohmann::json::array();
    for (auto i : picked) samples.push_back({{"index", i}, {"label", d.train.labels[i]}});
    write_text(dir / "samples.json", samples.dump() + "\n");
    for (std::size_t h : layers) {
      const auto t = nn::extract_representations(m->network, images, nn::hidden_layer_index(m->spec, h),
                                                 config_.extract_batch_size);
      io::write_tensor(t, dir / ("layer" + std::to_string(h) + ".artn"), io::ArtnDtype::f32);
    }
    log(run_name(v, s) + ": wrote representations of " + std::to_string(layers.size()) + " layers to " + dir.string());
  }
  stage_meta_["extract"] = {{"seconds", seconds_since(t0)}};
  write_manifest();
}

void Experiment::sparsity() {
  const auto t0 = Clock::now();
  const auto& d = data();
  const auto layers = config_.layers();
  std::vector<SparsityRows> rows;
  for (auto [v, s] : runs()) {
    auto* m = model(v, s);
    if (!m) continue;
    rows.push_back({to_string(v), s,
                    sparsity::sparsity_over_layers(m->network, d.train, config_.sparsity_sample_count,
                                                   config_.sparsity_seed(v, s), layers, config_.extract_batch_size,
                                                   config_.sparsity_tau)});
    log(run_name(v, s) + ": sparsity done");
  }
  write_text(run_dir() / "sparsity.csv", sparsity_csv(config_.run_id, rows));
  stage_meta_["sparsity"] = {{"seconds", seconds_since(t0)}};
  write_manifest();
}

void Experiment::cluster() {
  const auto t0 = Clock::now();
  const auto& d = data();
  const auto layers = config_.layers();
  std::vector<ClusteringRows> rows;
  for (auto [v, s] : runs()) {
    auto* m = model(v, s);
    if (!m) continue;
    rows.push_back({to_string(v), s,
                    cluster::clustering_over_layers(m->network, d.train, config_.clustering_sample_count,
                                                    config_.clustering_seed(v, s), layers, config_.clustering,
                                                    config_.extract_batch_size, config_.unstable_below())});
    log(run_name(v, s) + ": clustering done");
  }
  write_text(run_dir() / "clustering.csv", clustering_csv(config_.run_id, rows));
  write_text(run_dir() / "dbi_by_k.csv", dbi_by_k_csv(config_.run_id, rows));
  stage_meta_["cluster"] = {{"seconds", seconds_since(t0)}};
  write_manifest();
}

void Experiment::report() {
  const auto t0 = Clock::now();
  const auto rep = read_run_report(run_dir());
  const auto agg = aggregate_seeds(rep);
  write_text(run_dir() / "aggregate.csv", aggregate_csv(agg));
  for (FigureKind k : all_figure_kinds()) emit_plot_data(agg, k, run_dir() / "plots");
  log("report: " + std::to_string(rep.records.size()) + " records aggregated into " +
      std::to_string(agg.entries.size()) + " entries");
  stage_meta_["report"] = {{"seconds", seconds_since(t0)}};
  write_manifest();
}

void Experiment::run_all() {
  train();
  sparsity();
  cluster();
  report();
}

void Experiment::write_manifest() {
  nlohmann::json j{{"run_id", config_.run_id},
                   {"config_hash", config_.hash()},
                   {"config", config_.to_json()},
                   {"simd_backend", simd::to_string(simd::active().backend)},
                   {"runs", run_meta_},
                   {"stages", stage_meta_},
                   {"written_at", utc_now()}};
  if (data_) j["data"] = data_->provenance;
  write_text(run_dir() / "manifest.json", j.dump(2) + "\n");
}

}  // namespace repscope::pipeline
