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

#include "repscope/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "repscope/common/error.hpp"

namespace repscope::pipeline {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path, std::size_t columns) {
  std::vector<std::vector<std::string>> rows;
  if (!fs::exists(path)) return rows;
  std::istringstream in(read_text(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = split(line);
    if (f.size() != columns)
      throw DataError(path.string() + ": expected " + std::to_string(columns) + " columns, got " +
                      std::to_string(f.size()));
    rows.push_back(std::move(f));
  }
  return rows;
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("malformed integer '" + s + "' in report");
  }
}

std::string optional_number(double v, bool present) { return present ? format_number(v) : std::string(); }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("malformed number '" + s + "' in report");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const AggregateEntry* AggregateReport::find(const std::string& variant, std::size_t layer, const std::string& metric,
                                            long channel) const {
  for (const auto& e : entries)
    if (e.variant == variant && e.layer == layer && e.metric == metric && e.channel == channel) return &e;
  return nullptr;
}

AggregateReport aggregate_seeds(const RunReport& report) {
  using Key = std::tuple<std::string, std::size_t, long, std::string>;  // metric, layer, channel, variant
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : report.records) {
    auto& g = groups[Key{r.metric, r.layer, r.channel, r.variant}];
    if (!std::isnan(r.value)) g.push_back(r.value);
  }
  AggregateReport agg;
  agg.run_id = report.run_id;
  for (auto& [key, values] : groups) {
    AggregateEntry e;
    std::tie(e.metric, e.layer, e.channel, e.variant) = key;
    e.count = values.size();
    if (values.empty()) {
      e.mean = e.std = e.min = e.max = std::numeric_limits<double>::quiet_NaN();
    } else {
      // Sorting first makes the sums independent of the seed order.
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      e.mean = sum / static_cast<double>(values.size());
      double sq = 0.0;
      for (double v : values) sq += (v - e.mean) * (v - e.mean);
      e.std = std::sqrt(sq / static_cast<double>(values.size()));
      e.min = values.front();
      e.max = values.back();
      e.mean = std::clamp(e.mean, e.min, e.max);
    }
    agg.entries.push_back(std::move(e));
  }
  return agg;
}

std::string sparsity_csv(const std::string& run_id, const std::vector<SparsityRows>& runs) {
  std::string out = "run_id,seed,bn_flag,layer,channel_index,sparsity\n";
  for (const auto& run : runs)
    for (const auto& rec : run.layers) {
      const std::string prefix = run_id + "," + std::to_string(run.seed) + "," + run.variant + "," +
                                 std::to_string(rec.hidden_layer) + ",";
      for (std::size_t c = 0; c < rec.channel.values.size(); ++c)
        out += prefix + std::to_string(c) + "," + format_number(rec.channel.values[c]) + "\n";
      out += prefix + "layer," + format_number(rec.layer.value) + "\n";
    }
  return out;
}

std::string clustering_csv(const std::string& run_id, const std::vector<ClusteringRows>& runs) {
  std::string out = "run_id,seed,bn_flag,layer,mode,k,dbi,k_star,inertia,dropped_rows,unstable\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& run : runs)
    for (const auto& rec : run.layers) {
      const std::string prefix = run_id + "," + std::to_string(run.seed) + "," + run.variant + "," +
                                 std::to_string(rec.hidden_layer) + ",";
      const std::string suffix = "," + std::to_string(rec.dropped_rows) + "," + (rec.unstable ? "1" : "0") + "\n";
      out += prefix + "class_based," + std::to_string(rec.classes_present) + "," +
             format_number(rec.class_based ? rec.class_based->dbi : nan) + ",," + suffix;
      if (rec.sweep) {
        const auto& s = *rec.sweep;
        out += prefix + "class_agnostic," + std::to_string(s.k_star) + "," + format_number(s.best_score.dbi) + "," +
               std::to_string(s.k_star) + "," + format_number(s.best.inertia) + suffix;
      } else {
        out += prefix + "class_agnostic,,nan,nan," + suffix;
      }
    }
  return out;
}

std::string dbi_by_k_csv(const std::string& run_id, const std::vector<ClusteringRows>& runs) {
  std::string out = "run_id,seed,bn_flag,layer,k,dbi,inertia\n";
  for (const auto& run : runs)
    for (const auto& rec : run.layers) {
      if (!rec.sweep) continue;
      for (std::size_t i = 0; i < rec.sweep->ks.size(); ++i)
        out += run_id + "," + std::to_string(run.seed) + "," + run.variant + "," + std::to_string(rec.hidden_layer) +
               "," + std::to_string(rec.sweep->ks[i]) + "," + format_number(rec.sweep->dbi[i]) + "," +
               format_number(rec.sweep->inertia[i]) + "\n";
    }
  return out;
}

std::string accuracy_csv(const std::string& run_id, const std::vector<AccuracyRow>& rows) {
  std::string out = "run_id,seed,bn_flag,status,train_accuracy,val_accuracy,test_accuracy,epochs,stop_reason\n";
  for (const auto& r : rows)
    out += run_id + "," + std::to_string(r.seed) + "," + r.variant + "," + r.status + "," +
           optional_number(r.train_accuracy, r.train_accuracy >= 0.0) + "," +
           optional_number(r.val_accuracy, r.val_accuracy >= 0.0) + "," +
           optional_number(r.test_accuracy, r.test_accuracy >= 0.0) + "," + std::to_string(r.epochs) + "," +
           r.stop_reason + "\n";
  return out;
}

std::string aggregate_csv(const AggregateReport& agg) {
  std::string out = "metric,layer,channel_index,bn_flag,seeds,mean,std,min,max\n";
  for (const auto& e : agg.entries)
    out += e.metric + "," + std::to_string(e.layer) + "," + (e.channel < 0 ? "" : std::to_string(e.channel)) + "," +
           e.variant + "," + std::to_string(e.count) + "," + format_number(e.mean) + "," + format_number(e.std) + "," +
           format_number(e.min) + "," + format_number(e.max) + "\n";
  return out;
}

RunReport read_run_report(const fs::path& dir) {
  RunReport rep;
  auto take_run_id = [&](const std::string& id) {
    if (rep.run_id.empty()) rep.run_id = id;
  };
  for (const auto& f : read_rows(dir / "sparsity.csv", 6)) {
    take_run_id(f[0]);
    MetricRecord r{f[2], parse_u64(f[1]), parse_u64(f[3]), "", -1, parse_number(f[5])};
    if (f[4] == "layer") {
      r.metric = kLayerSparsity;
    } else {
      r.metric = kChannelSparsity;
      r.channel = static_cast<long>(parse_u64(f[4]));
    }
    rep.records.push_back(std::move(r));
  }
  for (const auto& f : read_rows(dir / "clustering.csv", 11)) {
    take_run_id(f[0]);
    const std::uint64_t seed = parse_u64(f[1]);
    const std::size_t layer = parse_u64(f[3]);
    if (f[4] == "class_based") {
      rep.records.push_back({f[2], seed, layer, kClassDbi, -1, parse_number(f[6])});
    } else if (f[4] == "class_agnostic") {
      rep.records.push_back({f[2], seed, layer, kAgnosticDbi, -1, parse_number(f[6])});
      rep.records.push_back({f[2], seed, layer, kOptimalK, -1, parse_number(f[7])});
    } else {
      throw DataError("clustering.csv: unknown mode '" + f[4] + "'");
    }
  }
  for (const auto& f : read_rows(dir / "accuracy.csv", 9)) {
    take_run_id(f[0]);
    AccuracyRow a;
    a.seed = parse_u64(f[1]);
    a.variant = f[2];
    a.status = f[3];
    a.train_accuracy = f[4].empty() ? -1.0 : parse_number(f[4]);
    a.val_accuracy = f[5].empty() ? -1.0 : parse_number(f[5]);
    a.test_accuracy = f[6].empty() ? -1.0 : parse_number(f[6]);
    a.epochs = parse_u64(f[7]);
    a.stop_reason = f[8];
    rep.accuracy.push_back(std::move(a));
  }
  return rep;
}

}  // namespace repscope::pipeline
