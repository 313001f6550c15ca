/*
 * Copyright 2026 The kgzsl Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KGZSL_CLI_PIPELINE_H_
#define KGZSL_CLI_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgzsl/cli/config.h"
#include "kgzsl/common/error.h"
#include "kgzsl/eval/metrics.h"
#include "kgzsl/kg/graph.h"

namespace kgzsl::cli {

inline constexpr const char* kToolVersion = "kgzsl 0.1.0";

// Files read and written by one command.
struct StageRecord {
  std::string command;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
};

// Adds (or replaces) the command's entry in `<run_dir>/manifest.json`:
// config and its hash, seed, tool version, input and output digests and
// the wall-clock time. Only `wall_clock_seconds` varies between reruns.
void record_manifest(const RunConfig& config, const StageRecord& record,
                     double wall_clock_seconds);

// Strips every wall-clock field so two manifests can be compared.
nlohmann::json manifest_without_clock(const nlohmann::json& manifest);

// Graph from the configured sources and seeds.
kg::KnowledgeGraph build_graph(const RunConfig& config,
                               nlohmann::json* sidecar = nullptr);

// Stage commands. Each reads its inputs from the config or the run
// directory, writes artifacts into the run directory and updates the
// manifest.
StageRecord run_build_graph(const RunConfig& config);
StageRecord run_train_embeddings(const RunConfig& config);
StageRecord run_finetune(const RunConfig& config);
StageRecord run_predict(const RunConfig& config);
// Also returns the summary row. Throws kMetricBounds if the row breaks
// best_hm <= hm(seen, unseen) or auc <= seen * unseen.
StageRecord run_evaluate(const RunConfig& config,
                         eval::MetricsRow* row = nullptr);

// Every stage in order; returns the evaluation row.
eval::MetricsRow run_pipeline(const RunConfig& config);

// Checks the two consistency bounds (with a 1e-12 slack).
bool metric_bounds_hold(const eval::MetricsRow& row);

struct GridPoint {
  gnn::Architecture architecture = gnn::Architecture::kTrGcn;
  kg::SourceKind source = kg::SourceKind::kConceptNet;
  int hops = 2;
  bool threshold = false;
  Baseline baseline = Baseline::kNone;

  // e.g. "Tr-GCN CN_H2_TH" or "GCN CN+WN_H3_UN".
  std::string name() const;
  // Filesystem-safe form of name().
  std::string slug() const;
};

// Cross product of the `ablate` axes in config order (architecture
// outermost). Combinations that need a missing WordNet taxonomy are left
// out and listed in `skipped`.
std::vector<GridPoint> enumerate_grid(const RunConfig& config,
                                      std::vector<std::string>* skipped);

struct PointResult {
  GridPoint point;
  std::optional<eval::MetricsRow> row;
  std::optional<ErrorCode> error;
  std::string message;
};

// Config of one grid point, writing under `dir`.
RunConfig point_config(const RunConfig& base, const GridPoint& p,
                       const std::filesystem::path& dir);

// Runs each point in its own directory under `<run_dir>/ablation` with a
// pool of `workers` threads. A failing point is recorded and the grid
// continues. Writes report.csv, report.md, metrics.csv and failures.json
// into the run directory; results come back in grid order.
std::vector<PointResult> run_ablation(const RunConfig& config,
                                      size_t workers);

}  // namespace kgzsl::cli

#endif  // KGZSL_CLI_PIPELINE_H_
