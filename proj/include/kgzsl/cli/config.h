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

#ifndef KGZSL_CLI_CONFIG_H_
#define KGZSL_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kgzsl/eval/metrics.h"
#include "kgzsl/gnn/model.h"
#include "kgzsl/kg/builder.h"
#include "kgzsl/trainer/train.h"
#include "kgzsl/zsl/head.h"

namespace kgzsl::cli {

enum class Baseline { kNone, kRandom, kUnrelated };

std::string_view baseline_name(Baseline b);  // "none", "RN", "UN"
Baseline parse_baseline(std::string_view s);

// Structured run configuration. The JSON form is the source of truth;
// typed views are derived on demand. Relative paths resolve against
// base_dir (the directory of the config file).
class RunConfig {
 public:
  // All defaults, no seed.
  RunConfig();
  explicit RunConfig(nlohmann::json json,
                     std::filesystem::path base_dir = ".");

  static RunConfig load(const std::filesystem::path& file);

  // `key.sub=value`; the value is parsed as JSON when possible and kept
  // as a string otherwise. Throws kUsage on a malformed override.
  void apply_override(std::string_view assignment);

  const nlohmann::json& json() const { return json_; }
  nlohmann::json& json() { return json_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }

  // kConfig when the seed is missing.
  uint64_t seed() const;
  // Empty optional when the path key is unset or empty.
  std::optional<std::filesystem::path> path(std::string_view key) const;
  // As path(), but kConfig when unset and kIo when the file is absent.
  std::filesystem::path required_path(std::string_view key) const;
  std::filesystem::path run_dir() const;

  kg::SourceKind graph_source() const;
  // Policy for one source. Rule "TH" resolves to a weight threshold for
  // ConceptNet edges and a Wu-Palmer threshold for WordNet edges.
  kg::BuildPolicy build_policy(kg::SourceKind part) const;
  kg::SeedMode seed_mode() const;
  gnn::GnnConfig gnn_config(size_t input_dim, size_t output_dim) const;
  size_t node_feature_dim() const;
  trainer::TrainPlan train_plan() const;
  zsl::FinetunePlan finetune_plan() const;
  eval::Averaging averaging() const;
  Baseline baseline() const;
  // Label used for report rows; "model" when unset.
  std::string name() const;

  // Seed and referenced input files present; typed sections parse.
  void validate() const;

  // SHA-256 of the canonical JSON dump.
  std::string hash() const;

 private:
  const nlohmann::json& section(std::string_view name) const;

  nlohmann::json json_;
  std::filesystem::path base_dir_;
};

nlohmann::json default_config();

}  // namespace kgzsl::cli

#endif  // KGZSL_CLI_CONFIG_H_
