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
#include <string>
#include <vector>

#include "repscope/cluster/analysis.hpp"
#include "repscope/sparsity/sparsity.hpp"

namespace repscope::pipeline {

/// Fixed 9-significant-digit decimal ("%.9g"); "nan" for NaN.
std::string format_number(double v);
/// Inverse of format_number. Throws DataError on malformed text.
double parse_number(const std::string& s);

// Metric names used in records and aggregates.
inline constexpr const char* kLayerSparsity = "layer_sparsity";
inline constexpr const char* kChannelSparsity = "channel_sparsity";
inline constexpr const char* kClassDbi = "class_dbi";
inline constexpr const char* kOptimalK = "optimal_k";
inline constexpr const char* kAgnosticDbi = "agnostic_dbi";

/// One scalar metric of one (variant, seed, layer[, channel]) run.
struct MetricRecord {
  std::string variant;  // "bn" or "nbn"
  std::uint64_t seed = 0;
  std::size_t layer = 0;
  std::string metric;
  long channel = -1;  // channel index for channel_sparsity, else -1
  double value = 0.0;
};

struct AccuracyRow {
  std::string variant;
  std::uint64_t seed = 0;
  std::string status;  // "ok" or "diverged"
  double train_accuracy = -1.0;
  double val_accuracy = -1.0;
  double test_accuracy = -1.0;
  std::size_t epochs = 0;
  std::string stop_reason;
};

struct RunReport {
  std::string run_id;
  std::vector<MetricRecord> records;
  std::vector<AccuracyRow> accuracy;
};

struct AggregateEntry {
  std::string variant;
  std::size_t layer = 0;
  std::string metric;
  long channel = -1;
  std::size_t count = 0;  // seeds with a defined value
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
};

struct AggregateReport {
  std::string run_id;
  std::vector<AggregateEntry> entries;  // sorted by (metric, layer, channel, variant)

  const AggregateEntry* find(const std::string& variant, std::size_t layer, const std::string& metric,
                             long channel = -1) const;
};

/// Mean and population standard deviation across seeds per (variant, layer,
/// metric, channel). NaN values (undefined metrics) are skipped; a key
/// without any defined value gets count 0 and NaN statistics.
AggregateReport aggregate_seeds(const RunReport& report);

// --- CSV rows ---------------------------------------------------------------

struct SparsityRows {
  std::string variant;
  std::uint64_t seed;
  std::vector<sparsity::LayerSparsityRecord> layers;
};
struct ClusteringRows {
  std::string variant;
  std::uint64_t seed;
  std::vector<cluster::LayerClustering> layers;
};

/// sparsity.csv: run_id,seed,bn_flag,layer,channel_index,sparsity with one
/// row per channel plus a "layer" row per layer.
std::string sparsity_csv(const std::string& run_id, const std::vector<SparsityRows>& runs);
/// clustering.csv: run_id,seed,bn_flag,layer,mode,k,dbi,k_star,inertia,
/// dropped_rows,unstable with a class_based and a class_agnostic row per layer.
std::string clustering_csv(const std::string& run_id, const std::vector<ClusteringRows>& runs);
/// dbi_by_k.csv: run_id,seed,bn_flag,layer,k,dbi,inertia (the full sweep).
std::string dbi_by_k_csv(const std::string& run_id, const std::vector<ClusteringRows>& runs);
/// accuracy.csv: run_id,seed,bn_flag,status,train_accuracy,val_accuracy,
/// test_accuracy,epochs,stop_reason.
std::string accuracy_csv(const std::string& run_id, const std::vector<AccuracyRow>& rows);
/// aggregate.csv: metric,layer,channel_index,bn_flag,seeds,mean,std,min,max.
std::string aggregate_csv(const AggregateReport& agg);

/// Rebuilds a RunReport from the CSV files in `dir`; missing files are
/// treated as empty. Throws DataError on malformed rows.
RunReport read_run_report(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace repscope::pipeline
