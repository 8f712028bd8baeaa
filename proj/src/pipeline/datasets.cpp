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

#include "repscope/pipeline/datasets.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "repscope/common/error.hpp"
#include "repscope/common/random.hpp"
#include "repscope/io/formats.hpp"

namespace repscope::pipeline {
namespace {

namespace fs = std::filesystem;

fs::path require(const fs::path& p) {
  if (!fs::exists(p)) throw DataError("missing dataset file " + p.string());
  return p;
}

struct Pools {
  LabeledDataset train;
  LabeledDataset test;
  nlohmann::json files;
};

Pools load_mnist(const fs::path& root) {
  const fs::path dir = root / "mnist";
  const auto ti = require(dir / "train-images-idx3-ubyte"), tl = require(dir / "train-labels-idx1-ubyte");
  const auto vi = require(dir / "t10k-images-idx3-ubyte"), vl = require(dir / "t10k-labels-idx1-ubyte");
  return {io::read_idx_dataset(ti, tl, 10), io::read_idx_dataset(vi, vl, 10),
          {{"train", {ti.filename().string(), tl.filename().string()}},
           {"test", {vi.filename().string(), vl.filename().string()}}}};
}

Pools load_cifar(const fs::path& root) {
  fs::path dir = root / "cifar10";
  if (!fs::exists(dir) && fs::exists(root / "cifar-10-batches-bin")) dir = root / "cifar-10-batches-bin";
  std::vector<LabeledDataset> parts;
  nlohmann::json names = nlohmann::json::array();
  for (int b = 1; b <= 5; ++b) {
    const auto p = require(dir / ("data_batch_" + std::to_string(b) + ".bin"));
    parts.push_back(io::read_cifar_batch(p));
    names.push_back(p.filename().string());
  }
  const auto t = require(dir / "test_batch.bin");
  return {io::concat(parts), io::read_cifar_batch(t), {{"train", names}, {"test", {t.filename().string()}}}};
}

}  // namespace

fs::path data_root() {
  const char* env = std::getenv("REPSCOPE_DATA_DIR");
  return env && *env ? fs::path(env) : fs::path("data");
}

LabeledDataset make_synthetic_blobs(std::size_t n, std::size_t classes, const nn::ActShape& shape, double noise,
                                    std::uint64_t prototype_seed, std::uint64_t sample_seed) {
  if (n == 0 || classes < 2) throw InvalidArgument("make_synthetic_blobs: need n >= 1 and >= 2 classes");
  const std::size_t per = shape.count();
  Rng proto_rng(prototype_seed);
  std::vector<double> protos(classes * per);
  for (auto& v : protos) v = proto_rng.uniform01();
  Rng rng(sample_seed);
  std::vector<double> pixels(n * per);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % classes;
    labels[i] = static_cast<std::uint32_t>(c);
    for (std::size_t j = 0; j < per; ++j)
      pixels[i * per + j] = std::clamp(protos[c * per + j] + noise * rng.normal(), 0.0, 1.0);
  }
  return {ActTensor4(Dims4{n, shape.c, shape.h, shape.w}, std::move(pixels)), std::move(labels), classes};
}

DataSplits load_splits(const ExperimentConfig& config, const fs::path& root) {
  const auto& d = config.data;
  const std::size_t n_val = d.validation_count();
  Pools pools = [&] {
    switch (config.dataset) {
      case DatasetKind::mnist: return load_mnist(root);
      case DatasetKind::cifar10: return load_cifar(root);
      case DatasetKind::synthetic_blobs: {
        const auto shape = config.network(Variant::nbn).input;
        const std::size_t pool = std::max(config.synthetic.pool_samples, d.train_samples + n_val);
        const std::uint64_t proto = derive_seed(config.master_seed, "synthetic-prototypes");
        return Pools{make_synthetic_blobs(pool, config.synthetic.classes, shape, config.synthetic.noise, proto,
                                          derive_seed(config.master_seed, "synthetic-train")),
                     make_synthetic_blobs(d.test_samples, config.synthetic.classes, shape, config.synthetic.noise,
                                          proto, derive_seed(config.master_seed, "synthetic-test")),
                     {{"generator", "synthetic_blobs"}}};
      }
    }
    throw ConfigError("unknown dataset");
  }();
  if (d.train_samples + n_val > pools.train.size())
    throw ConfigError("config: train_samples + validation_samples = " + std::to_string(d.train_samples + n_val) +
                      " exceeds the training pool of " + std::to_string(pools.train.size()));
  if (d.test_samples > pools.test.size())
    throw ConfigError("config: test_samples = " + std::to_string(d.test_samples) + " exceeds the test pool of " +
                      std::to_string(pools.test.size()));

  const std::uint64_t split_seed = derive_seed(config.master_seed, "split");
  Rng rng(split_seed);
  const auto drawn = rng.sample_without_replacement(pools.train.size(), d.train_samples + n_val);
  const std::span<const std::size_t> all(drawn);
  Rng test_rng(derive_seed(config.master_seed, "test-split"));
  const auto test_idx = test_rng.sample_without_replacement(pools.test.size(), d.test_samples);

  DataSplits s{pools.train.subset(all.first(d.train_samples)),
               n_val > 0 ? std::optional<LabeledDataset>(pools.train.subset(all.subspan(d.train_samples)))
                         : std::nullopt,
               pools.test.subset(test_idx),
               {}};
  s.provenance = {{"dataset", to_string(config.dataset)},
                  {"files", pools.files},
                  {"train_pool", pools.train.size()},
                  {"test_pool", pools.test.size()},
                  {"train_samples", d.train_samples},
                  {"validation_samples", n_val},
                  {"test_samples", d.test_samples},
                  {"split_seed", split_seed},
                  {"preprocessing", config.dataset == DatasetKind::synthetic_blobs ? "none" : "bytes / 255"}};
  return s;
}

}  // namespace repscope::pipeline
