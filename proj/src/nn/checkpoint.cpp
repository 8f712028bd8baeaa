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

#include "repscope/nn/checkpoint.hpp"

#include <cstdio>
#include <string>

#include "repscope/common/error.hpp"
#include "repscope/io/formats.hpp"

namespace repscope::nn {
namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kFormat = "repscope-checkpoint";

struct NamedTensor {
  std::size_t layer;
  ParamRef<float> ref;
  bool buffer;
};

std::vector<NamedTensor> tensors_of(Network<float>& net) {
  std::vector<NamedTensor> out;
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    for (auto& p : net.layer(i).params()) out.push_back({i, p, false});
    for (auto& b : net.layer(i).buffers()) out.push_back({i, b, true});
  }
  return out;
}

std::string file_name(const NamedTensor& t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "L%03zu_", t.layer);
  return buf + t.ref.name + ".artn";
}

nlohmann::json read_manifest(const std::filesystem::path& dir) {
  const auto bytes = io::read_file_bytes(dir / kManifest);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint manifest " + (dir / kManifest).string() + ": " + e.what());
  }
  if (j.value("format", "") != kFormat) throw DataError("not a checkpoint manifest: " + (dir / kManifest).string());
  return j;
}

}  // namespace

void save_checkpoint(TrainedModel& model, const std::filesystem::path& dir, const nlohmann::json& extra) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& t : tensors_of(model.network)) {
    io::ArtnArray a;
    a.dims.assign(t.ref.shape.begin(), t.ref.shape.end());
    a.values = *t.ref.value;
    const std::string name = file_name(t);
    io::write_artn(a, dir / name);
    tensors.push_back({{"layer", t.layer},
                       {"name", t.ref.name},
                       {"kind", t.buffer ? "buffer" : "param"},
                       {"shape", t.ref.shape},
                       {"file", name}});
  }
  nlohmann::json j{{"format", kFormat},
                   {"version", 1},
                   {"spec", model.spec},
                   {"seed", model.seed},
                   {"config", model.config},
                   {"history", model.history},
                   {"accuracy",
                    {{"train", model.train_accuracy}, {"val", model.val_accuracy}, {"test", model.test_accuracy}}},
                   {"tensors", tensors},
                   {"extra", extra}};
  const std::string text = j.dump(2) + "\n";
  io::write_file_bytes(dir / kManifest,
                       std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

TrainedModel load_checkpoint(const std::filesystem::path& dir) {
  const auto j = read_manifest(dir);
  try {
    TrainedModel model(j.at("spec").get<NetworkSpec>());
    model.seed = j.at("seed").get<std::uint64_t>();
    model.config = j.at("config").get<TrainConfig>();
    model.history = j.at("history").get<TrainHistory>();
    const auto& acc = j.at("accuracy");
    model.train_accuracy = acc.at("train").get<double>();
    model.val_accuracy = acc.at("val").get<double>();
    model.test_accuracy = acc.at("test").get<double>();

    const auto expected = tensors_of(model.network);
    const auto& listed = j.at("tensors");
    if (listed.size() != expected.size())
      throw DataError("checkpoint lists " + std::to_string(listed.size()) + " tensors, spec needs " +
                      std::to_string(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& e = expected[i];
      const auto& entry = listed[i];
      if (entry.at("layer").get<std::size_t>() != e.layer || entry.at("name").get<std::string>() != e.ref.name)
        throw DataError("checkpoint tensor " + std::to_string(i) + " does not match the spec");
      const auto a = io::read_artn(dir / entry.at("file").get<std::string>());
      const std::vector<std::uint64_t> want(e.ref.shape.begin(), e.ref.shape.end());
      if (a.dims != want) throw DataError("checkpoint tensor " + entry.at("file").get<std::string>() + " has wrong shape");
      if (a.dtype() != io::ArtnDtype::f32)
        throw DataError("checkpoint tensor " + entry.at("file").get<std::string>() + " is not 32-bit");
      *e.ref.value = std::get<std::vector<float>>(a.values);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint manifest " + (dir / kManifest).string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw DataError("checkpoint manifest " + (dir / kManifest).string() + ": " + e.what());
  }
}

nlohmann::json checkpoint_extra(const std::filesystem::path& dir) { return read_manifest(dir).value("extra", nlohmann::json()); }

}  // namespace repscope::nn
