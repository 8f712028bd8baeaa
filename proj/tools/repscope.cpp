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

// repscope: train BatchNorm / non-BatchNorm CNNs and analyse the sparsity
// and cluster purity of their hidden representations.
//
//   repscope <train|extract|sparsity|cluster|report|all> --config run.json
//            [--seed N] [--variant bn|nbn] [--layers 1,3,6|all] [--out DIR]
//
// Exit codes: 0 success, 1 internal error, 2 configuration error, 3 data
// error, 4 training divergence (remaining runs still complete).

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "repscope/common/error.hpp"
#include "repscope/pipeline/experiment.hpp"

namespace {

using repscope::ConfigError;
using repscope::pipeline::Experiment;
using repscope::pipeline::ExperimentConfig;

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kDivergence = 4 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string variant;
  std::string layers;
  std::string out;
  bool quiet = false;
};

std::vector<std::size_t> parse_layers(const std::string& text) {
  if (text == "all") return {};
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("--layers: '" + item + "' is not a positive layer number");
    }
  }
  if (out.empty()) throw ConfigError("--layers: empty list");
  return out;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Experiment configuration (JSON)")->required();
  cmd->add_option("--seed", o.seed, "Only process this seed of the config");
  cmd->add_option("--variant", o.variant, "Only process this variant")->check(CLI::IsMember({"bn", "nbn"}));
  cmd->add_option("--layers", o.layers, "Hidden layers to analyse: comma-separated 1-based numbers or 'all'");
  cmd->add_option("--out", o.out, "Output directory (overrides output_dir)");
  cmd->add_flag("--quiet", o.quiet, "Suppress progress output");
}

int run(const std::string& stage, const Options& o) {
  ExperimentConfig cfg = repscope::pipeline::load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.layers.empty()) {
    cfg.analyzed_layers = parse_layers(o.layers);
    cfg.validate();
  }
  repscope::pipeline::RunFilter filter;
  if (!o.variant.empty()) filter.variant = repscope::pipeline::variant_from_string(o.variant);
  filter.seed = o.seed;
  Experiment exp(std::move(cfg), filter, o.quiet ? nullptr : &std::cerr);
  if (stage == "train") exp.train();
  else if (stage == "extract") exp.extract();
  else if (stage == "sparsity") exp.sparsity();
  else if (stage == "cluster") exp.cluster();
  else if (stage == "report") exp.report();
  else exp.run_all();
  if (exp.diverged()) {
    std::cerr << "repscope: at least one training run diverged (see accuracy.csv)\n";
    return kDivergence;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparsity and cluster-purity analysis of CNN representations with and without BatchNorm"};
  app.require_subcommand(1);
  Options opts;
  const std::pair<const char*, const char*> stages[] = {
      {"train", "Train (or reuse) every model of the run matrix and write accuracy.csv"},
      {"extract", "Dump post-ReLU representations of the analysed layers as ARTN tensors"},
      {"sparsity", "Channel and layer sparsity per analysed layer (sparsity.csv)"},
      {"cluster", "Class-based DBI and class-agnostic optimal-k sweep (clustering.csv)"},
      {"report", "Aggregate seeds and emit plot data from the CSV files"},
      {"all", "train, sparsity, cluster and report"}};
  for (const auto& [name, help] : stages) add_common(app.add_subcommand(name, help), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    return run(stage, opts);
  } catch (const repscope::ConfigError& e) {
    std::cerr << "repscope: configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const repscope::DataError& e) {
    std::cerr << "repscope: data error: " << e.what() << "\n";
    return kData;
  } catch (const repscope::DivergenceError& e) {
    std::cerr << "repscope: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "repscope: error: " << e.what() << "\n";
    return kInternal;
  }
}
