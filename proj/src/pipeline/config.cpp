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

#include "repscope/pipeline/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/nn/architectures.hpp"

namespace repscope::pipeline {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

DatasetKind dataset_from_string(const std::string& s) {
  if (s == "mnist") return DatasetKind::mnist;
  if (s == "cifar10") return DatasetKind::cifar10;
  if (s == "synthetic_blobs") return DatasetKind::synthetic_blobs;
  throw ConfigError("unknown dataset '" + s + "' (expected mnist, cifar10 or synthetic_blobs)");
}

Architecture architecture_from_string(const std::string& s) {
  if (s == "standard_cnn") return Architecture::standard_cnn;
  if (s == "vgg16") return Architecture::vgg16;
  throw ConfigError("unknown architecture '" + s + "' (expected standard_cnn or vgg16)");
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

nn::ActShape input_shape(DatasetKind d) {
  return d == DatasetKind::cifar10 ? nn::ActShape{3, 32, 32, false} : nn::ActShape{1, 28, 28, false};
}

std::size_t class_count(const ExperimentConfig& c) {
  return c.dataset == DatasetKind::synthetic_blobs ? c.synthetic.classes : 10;
}

}  // namespace

const char* to_string(DatasetKind d) noexcept {
  switch (d) {
    case DatasetKind::mnist: return "mnist";
    case DatasetKind::cifar10: return "cifar10";
    case DatasetKind::synthetic_blobs: return "synthetic_blobs";
  }
  return "?";
}

const char* to_string(Architecture a) noexcept { return a == Architecture::vgg16 ? "vgg16" : "standard_cnn"; }
const char* to_string(Variant v) noexcept { return v == Variant::bn ? "bn" : "nbn"; }

Variant variant_from_string(const std::string& s) {
  if (s == "bn") return Variant::bn;
  if (s == "nbn") return Variant::nbn;
  throw ConfigError("unknown variant '" + s + "' (expected bn or nbn)");
}

void ExperimentConfig::validate() const {
  if (run_id.empty()) throw ConfigError("config: run_id must be non-empty");
  if (run_id.find_first_of("/\\,\"\n") != std::string::npos || run_id == "." || run_id == "..")
    throw ConfigError("config: run_id must be a plain name");
  if (variants.empty()) throw ConfigError("config: bn_variants must be non-empty");
  if (std::set<Variant>(variants.begin(), variants.end()).size() != variants.size())
    throw ConfigError("config: bn_variants lists a variant twice");
  if (seeds.empty()) throw ConfigError("config: seeds must be non-empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("config: seeds lists a value twice");
  for (Variant v : variants) {
    const auto it = train.find(v);
    if (it == train.end()) throw ConfigError(std::string("config: missing train settings for variant ") + to_string(v));
    it->second.validate();
  }
  if (data.train_samples < 2) throw ConfigError("config: data.train_samples must be >= 2");
  if (data.test_samples < 1) throw ConfigError("config: data.test_samples must be >= 1");
  if (sparsity_sample_count < 1 || sparsity_sample_count > data.train_samples)
    throw ConfigError("config: sparsity_sample_count must be in 1..train_samples");
  if (clustering_sample_count < 1 || clustering_sample_count > data.train_samples)
    throw ConfigError("config: clustering_sample_count must be in 1..train_samples");
  if (clustering.k_min < 2 || clustering.k_min > clustering.k_max)
    throw ConfigError("config: clustering needs 2 <= k_min <= k_max");
  if (clustering.k_max > clustering_sample_count)
    throw ConfigError("config: clustering.k_max exceeds clustering_sample_count");
  if (clustering.restarts < 1 || clustering.kmeans.max_iters < 1 || !(clustering.kmeans.tol >= 0.0))
    throw ConfigError("config: clustering restarts/max_iters must be >= 1 and tol >= 0");
  if (!(sparsity_tau >= 0.0)) throw ConfigError("config: sparsity_tau must be >= 0");
  if (extract_batch_size < 1) throw ConfigError("config: extract_batch_size must be >= 1");
  if (dataset == DatasetKind::synthetic_blobs) {
    if (synthetic.classes < 2) throw ConfigError("config: synthetic.classes must be >= 2");
    if (!(synthetic.noise >= 0.0)) throw ConfigError("config: synthetic.noise must be >= 0");
  }
  if (dataset == DatasetKind::cifar10 && architecture == Architecture::standard_cnn)
    throw ConfigError("config: standard_cnn is defined for 28x28 single-channel inputs");
  const std::size_t hidden = hidden_layer_count();
  for (std::size_t h : analyzed_layers)
    if (h < 1 || h > hidden)
      throw ConfigError("config: analyzed layer " + std::to_string(h) + " out of range 1.." + std::to_string(hidden));
}

json ExperimentConfig::to_json() const {
  json variants_j = json::array();
  for (Variant v : variants) variants_j.push_back(to_string(v));
  json train_j = json::object();
  for (const auto& [v, t] : train) train_j[to_string(v)] = t;
  json data_j{{"train_samples", data.train_samples}, {"test_samples", data.test_samples},
              {"validation_samples", data.validation_count()}};
  json layers_j = analyzed_layers.empty() ? json("all") : json(analyzed_layers);
  json clustering_j{{"k_min", clustering.k_min},
                    {"k_max", clustering.k_max},
                    {"restarts", clustering.restarts},
                    {"max_iters", clustering.kmeans.max_iters},
                    {"tol", clustering.kmeans.tol},
                    {"init", clustering.kmeans.init == cluster::KMeansInit::random ? "random" : "kmeans++"}};
  json j{{"run_id", run_id},
         {"dataset", to_string(dataset)},
         {"architecture", to_string(architecture)},
         {"bn_variants", variants_j},
         {"seeds", seeds},
         {"master_seed", master_seed},
         {"data", data_j},
         {"train", train_j},
         {"sparsity_sample_count", sparsity_sample_count},
         {"clustering_sample_count", clustering_sample_count},
         {"analyzed_layers", layers_j},
         {"clustering", clustering_j},
         {"sparsity_tau", sparsity_tau},
         {"extract_batch_size", extract_batch_size},
         {"output_dir", output_dir.generic_string()}};
  if (dataset == DatasetKind::synthetic_blobs)
    j["synthetic"] = {{"classes", synthetic.classes}, {"noise", synthetic.noise}, {"pool_samples", synthetic.pool_samples}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j,
                 {"run_id", "dataset", "architecture", "bn_variants", "seeds", "master_seed", "data", "synthetic",
                  "train", "sparsity_sample_count", "clustering_sample_count", "analyzed_layers", "clustering",
                  "sparsity_tau", "extract_batch_size", "output_dir"},
                 "config");
  ExperimentConfig c;
  try {
    c.run_id = j.at("run_id").get<std::string>();
    if (j.contains("dataset")) c.dataset = dataset_from_string(j.at("dataset").get<std::string>());
    if (j.contains("architecture")) c.architecture = architecture_from_string(j.at("architecture").get<std::string>());
    if (j.contains("bn_variants")) {
      c.variants.clear();
      for (const auto& v : j.at("bn_variants")) c.variants.push_back(variant_from_string(v.get<std::string>()));
    }
    c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    read_opt(j, "master_seed", c.master_seed);
    if (j.contains("data")) {
      const auto& d = j.at("data");
      reject_unknown(d, {"train_samples", "validation_samples", "test_samples"}, "config.data");
      read_opt(d, "train_samples", c.data.train_samples);
      read_opt(d, "test_samples", c.data.test_samples);
      if (d.contains("validation_samples")) c.data.validation_samples = d.at("validation_samples").get<std::size_t>();
    }
    if (j.contains("synthetic")) {
      const auto& s = j.at("synthetic");
      reject_unknown(s, {"classes", "noise", "pool_samples"}, "config.synthetic");
      read_opt(s, "classes", c.synthetic.classes);
      read_opt(s, "noise", c.synthetic.noise);
      read_opt(s, "pool_samples", c.synthetic.pool_samples);
    }
    if (!j.contains("train")) throw ConfigError("config: missing 'train' (one TrainConfig per variant)");
    const auto& t = j.at("train");
    if (!t.is_object()) throw ConfigError("config.train must be an object keyed by variant");
    for (const auto& [key, value] : t.items()) c.train[variant_from_string(key)] = value.get<nn::TrainConfig>();
    read_opt(j, "sparsity_sample_count", c.sparsity_sample_count);
    read_opt(j, "clustering_sample_count", c.clustering_sample_count);
    if (j.contains("analyzed_layers")) {
      const auto& l = j.at("analyzed_layers");
      if (l.is_string()) {
        if (l.get<std::string>() != "all") throw ConfigError("config: analyzed_layers must be \"all\" or a list");
      } else {
        c.analyzed_layers = l.get<std::vector<std::size_t>>();
      }
    }
    if (j.contains("clustering")) {
      const auto& k = j.at("clustering");
      reject_unknown(k, {"k_min", "k_max", "restarts", "max_iters", "tol", "init"}, "config.clustering");
      read_opt(k, "k_min", c.clustering.k_min);
      read_opt(k, "k_max", c.clustering.k_max);
      read_opt(k, "restarts", c.clustering.restarts);
      read_opt(k, "max_iters", c.clustering.kmeans.max_iters);
      read_opt(k, "tol", c.clustering.kmeans.tol);
      if (k.contains("init")) {
        const auto s = k.at("init").get<std::string>();
        if (s == "kmeans++")
          c.clustering.kmeans.init = cluster::KMeansInit::kmeans_plus_plus;
        else if (s == "random")
          c.clustering.kmeans.init = cluster::KMeansInit::random;
        else
          throw ConfigError("config.clustering: unknown init '" + s + "'");
      }
    }
    read_opt(j, "sparsity_tau", c.sparsity_tau);
    read_opt(j, "extract_batch_size", c.extract_batch_size);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  std::sort(c.analyzed_layers.begin(), c.analyzed_layers.end());
  c.analyzed_layers.erase(std::unique(c.analyzed_layers.begin(), c.analyzed_layers.end()), c.analyzed_layers.end());
  c.validate();
  return c;
}

std::string ExperimentConfig::hash() const {
  json j = to_json();
  j.erase("output_dir");
  return hex16(fnv1a64(j.dump()));
}

nn::NetworkSpec ExperimentConfig::network(Variant v) const {
  const bool bn = v == Variant::bn;
  const auto shape = input_shape(dataset);
  return architecture == Architecture::vgg16 ? nn::build_vgg16(bn, shape, class_count(*this))
                                             : nn::build_standard_cnn(bn, shape, class_count(*this));
}

std::size_t ExperimentConfig::hidden_layer_count() const { return network(Variant::nbn).relu_layers().size(); }

std::vector<std::size_t> ExperimentConfig::layers() const {
  if (!analyzed_layers.empty()) return analyzed_layers;
  std::vector<std::size_t> all(hidden_layer_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i + 1;
  return all;
}

std::uint64_t ExperimentConfig::train_seed(Variant v, std::uint64_t seed) const {
  return derive_seed(master_seed, "train", {static_cast<std::uint64_t>(v), seed});
}
std::uint64_t ExperimentConfig::sparsity_seed(Variant v, std::uint64_t seed) const {
  return derive_seed(master_seed, "sparsity", {static_cast<std::uint64_t>(v), seed});
}
std::uint64_t ExperimentConfig::clustering_seed(Variant v, std::uint64_t seed) const {
  return derive_seed(master_seed, "clustering", {static_cast<std::uint64_t>(v), seed});
}

std::string ExperimentConfig::model_hash(Variant v, std::uint64_t seed) const {
  const json full = to_json();
  json j{{"dataset", full["dataset"]},
         {"architecture", full["architecture"]},
         {"data", full["data"]},
         {"master_seed", master_seed},
         {"variant", to_string(v)},
         {"seed", seed},
         {"train", train.at(v)}};
  if (full.contains("synthetic")) j["synthetic"] = full["synthetic"];
  return hex16(fnv1a64(j.dump()));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

}  // namespace repscope::pipeline
