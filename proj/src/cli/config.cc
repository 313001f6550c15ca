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

#include "kgzsl/cli/config.h"

#include <fstream>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::cli {

namespace fs = std::filesystem;
using Json = nlohmann::json;

std::string_view baseline_name(Baseline b) {
  switch (b) {
    case Baseline::kNone:
      return "none";
    case Baseline::kRandom:
      return "RN";
    case Baseline::kUnrelated:
      return "UN";
  }
  return "?";
}

Baseline parse_baseline(std::string_view s) {
  if (s == "none" || s.empty()) return Baseline::kNone;
  if (s == "RN") return Baseline::kRandom;
  if (s == "UN") return Baseline::kUnrelated;
  throw Error(ErrorCode::kConfig, "unknown baseline '" + std::string(s) +
                                      "' (expected none, RN or UN)");
}

Json default_config() {
  return Json::parse(R"({
    "seed": null,
    "name": "model",
    "paths": {
      "conceptnet": "", "wordnet": "", "seeds": "", "node_vectors": "",
      "anchors": "", "features": "", "classes": "", "run_dir": "run"
    },
    "graph": {
      "source": "CN", "hops": 2, "rule": "all", "min_weight": 1.0,
      "min_similarity": 0.5, "wup_reference": "frontier",
      "allowed_roots": [], "seed_mode": "lenient", "language": "en"
    },
    "gnn": {
      "architecture": "Tr-GCN", "hidden": [64], "node_feature_dim": 32,
      "leaky_alpha": 0.2, "normalize_output": true,
      "final_activation": false, "num_bases": 0, "lstm_hidden": 0,
      "proj_dim": 0
    },
    "train": {
      "epochs": 1000, "val_fraction": 0.05, "optimizer": "adam",
      "lr": 0.001, "momentum": 0.9, "allow_missing_anchors": false
    },
    "finetune": {
      "epochs": 50, "batch_size": 32, "optimizer": "sgd", "lr": 0.0001,
      "momentum": 0.9
    },
    "eval": {"averaging": "sample"},
    "baseline": "none",
    "ablate": {
      "architectures": ["GCN", "R-GCN", "LSTM", "Tr-GCN"],
      "sources": ["CN"], "hops": [2, 3], "policies": ["All", "TH"],
      "baselines": ["none"], "workers": 1
    }
  })");
}

namespace {

// Every user key must exist in the defaults, so typos fail loudly.
void check_known(const Json& user, const Json& defaults,
                 const std::string& prefix) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = prefix + it.key();
    if (!defaults.contains(it.key())) {
      throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
    const Json& d = defaults.at(it.key());
    if (d.is_object()) {
      if (!it->is_object()) {
        throw Error(ErrorCode::kConfig, "config key '" + key +
                                            "' must be an object");
      }
      check_known(*it, d, key + ".");
    }
  }
}

template <typename T>
T get(const Json& j, std::string_view section, std::string_view key) {
  try {
    return j.at(std::string(key)).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, "config key '" + std::string(section) +
                                        "." + std::string(key) +
                                        "' has the wrong type");
  }
}

}  // namespace

RunConfig::RunConfig() : json_(default_config()), base_dir_(".") {}

RunConfig::RunConfig(Json user, fs::path base_dir)
    : json_(default_config()), base_dir_(std::move(base_dir)) {
  if (!user.is_object()) {
    throw Error(ErrorCode::kConfig, "config must be a JSON object");
  }
  check_known(user, json_, "");
  json_.merge_patch(user);
  if (!json_.contains("seed")) json_["seed"] = nullptr;
}

RunConfig RunConfig::load(const fs::path& file) {
  const std::string text = read_file(file);
  Json parsed;
  try {
    parsed = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kConfig,
                "config " + file.string() + " is not valid JSON: " + e.what());
  }
  return RunConfig(std::move(parsed), file.parent_path().empty()
                                          ? fs::path(".")
                                          : file.parent_path());
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCode::kUsage, "override '" + std::string(assignment) +
                                       "' is not key=value");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  const std::string raw(trim(assignment.substr(eq + 1)));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  Json* node = &json_;
  const Json defaults = default_config();
  const Json* d = &defaults;
  const auto parts = split(key, '.');
  for (size_t i = 0; i < parts.size(); ++i) {
    const std::string part(parts[i]);
    if (!d->is_object() || !d->contains(part)) {
      throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
    d = &d->at(part);
    if (i + 1 == parts.size()) {
      (*node)[part] = std::move(value);
    } else {
      node = &(*node)[part];
    }
  }
}

const Json& RunConfig::section(std::string_view name) const {
  return json_.at(std::string(name));
}

uint64_t RunConfig::seed() const {
  const Json& s = json_.at("seed");
  if (s.is_null()) throw Error(ErrorCode::kConfig, "config needs a seed");
  if (!s.is_number_integer() || s.get<int64_t>() < 0) {
    throw Error(ErrorCode::kConfig, "seed must be a non-negative integer");
  }
  return s.get<uint64_t>();
}

std::optional<fs::path> RunConfig::path(std::string_view key) const {
  const auto value = get<std::string>(section("paths"), "paths", key);
  if (value.empty()) return std::nullopt;
  const fs::path p(value);
  return p.is_absolute() ? p : base_dir_ / p;
}

fs::path RunConfig::required_path(std::string_view key) const {
  const auto p = path(key);
  if (!p) {
    throw Error(ErrorCode::kConfig,
                "config path 'paths." + std::string(key) + "' is not set");
  }
  if (!fs::exists(*p)) {
    throw Error(ErrorCode::kIo, "input file " + p->string() + " (paths." +
                                    std::string(key) + ") does not exist");
  }
  return *p;
}

fs::path RunConfig::run_dir() const {
  const auto p = path("run_dir");
  return p ? *p : base_dir_ / "run";
}

kg::SourceKind RunConfig::graph_source() const {
  return kg::parse_source_kind(
      get<std::string>(section("graph"), "graph", "source"));
}

kg::BuildPolicy RunConfig::build_policy(kg::SourceKind part) const {
  const Json& g = section("graph");
  kg::BuildPolicy p;
  p.source = part;
  p.max_hops = get<int>(g, "graph", "hops");
  std::string rule = get<std::string>(g, "graph", "rule");
  if (rule == "TH" || rule == "th") {
    rule = part == kg::SourceKind::kWordNet ? "wup" : "weight";
  }
  if (rule == "all" || rule == "All") {
    p.rule = kg::IncludeAll{};
  } else if (rule == "weight") {
    p.rule = kg::WeightThreshold{get<double>(g, "graph", "min_weight")};
  } else if (rule == "wup") {
    const auto ref = get<std::string>(g, "graph", "wup_reference");
    if (ref != "frontier" && ref != "seed") {
      throw Error(ErrorCode::kConfig,
                  "graph.wup_reference must be frontier or seed");
    }
    p.rule = kg::WupThreshold{get<double>(g, "graph", "min_similarity"),
                              ref == "seed" ? kg::WupReference::kSeed
                                            : kg::WupReference::kFrontier};
  } else if (rule == "ancestor") {
    kg::AncestorFilter f;
    for (const auto& r :
         get<std::vector<std::string>>(g, "graph", "allowed_roots")) {
      f.allowed_roots.insert(kg::normalize_concept(r));
    }
    p.rule = std::move(f);
  } else {
    throw Error(ErrorCode::kConfig,
                "unknown graph.rule '" + rule +
                    "' (expected all, weight, wup, ancestor or TH)");
  }
  p.validate();
  return p;
}

kg::SeedMode RunConfig::seed_mode() const {
  const auto m = get<std::string>(section("graph"), "graph", "seed_mode");
  if (m == "lenient") return kg::SeedMode::kLenient;
  if (m == "strict") return kg::SeedMode::kStrict;
  throw Error(ErrorCode::kConfig, "graph.seed_mode must be lenient or strict");
}

size_t RunConfig::node_feature_dim() const {
  const auto d = get<int64_t>(section("gnn"), "gnn", "node_feature_dim");
  if (d <= 0) throw Error(ErrorCode::kConfig, "gnn.node_feature_dim must be > 0");
  return static_cast<size_t>(d);
}

gnn::GnnConfig RunConfig::gnn_config(size_t input_dim,
                                     size_t output_dim) const {
  const Json& g = section("gnn");
  gnn::GnnConfig c;
  c.architecture =
      gnn::parse_architecture(get<std::string>(g, "gnn", "architecture"));
  c.layer_dims.push_back(input_dim);
  for (int64_t h : get<std::vector<int64_t>>(g, "gnn", "hidden")) {
    if (h <= 0) throw Error(ErrorCode::kConfig, "gnn.hidden widths must be > 0");
    c.layer_dims.push_back(static_cast<size_t>(h));
  }
  c.layer_dims.push_back(output_dim);
  c.leaky_alpha = get<double>(g, "gnn", "leaky_alpha");
  c.normalize_output = get<bool>(g, "gnn", "normalize_output");
  c.final_activation = get<bool>(g, "gnn", "final_activation");
  c.num_bases = get<size_t>(g, "gnn", "num_bases");
  c.lstm_hidden = get<size_t>(g, "gnn", "lstm_hidden");
  c.proj_dim = get<size_t>(g, "gnn", "proj_dim");
  c.order_seed = numerics::Rng::derive_seed(seed(), 3);
  c.validate();
  return c;
}

trainer::TrainPlan RunConfig::train_plan() const {
  const Json& t = section("train");
  trainer::TrainPlan p;
  p.epochs = get<int>(t, "train", "epochs");
  p.val_fraction = get<double>(t, "train", "val_fraction");
  p.seed = numerics::Rng::derive_seed(seed(), 4);
  p.optimizer.kind =
      numerics::parse_optimizer_kind(get<std::string>(t, "train", "optimizer"));
  p.optimizer.lr = get<double>(t, "train", "lr");
  p.optimizer.momentum = get<double>(t, "train", "momentum");
  p.allow_missing_anchors = get<bool>(t, "train", "allow_missing_anchors");
  p.validate();
  return p;
}

zsl::FinetunePlan RunConfig::finetune_plan() const {
  const Json& f = section("finetune");
  zsl::FinetunePlan p;
  p.epochs = get<int>(f, "finetune", "epochs");
  p.batch_size = get<size_t>(f, "finetune", "batch_size");
  p.seed = numerics::Rng::derive_seed(seed(), 6);
  p.optimizer.kind = numerics::parse_optimizer_kind(
      get<std::string>(f, "finetune", "optimizer"));
  p.optimizer.lr = get<double>(f, "finetune", "lr");
  p.optimizer.momentum = get<double>(f, "finetune", "momentum");
  p.validate();
  return p;
}

eval::Averaging RunConfig::averaging() const {
  const auto a = get<std::string>(section("eval"), "eval", "averaging");
  if (a == "sample") return eval::Averaging::kPerSample;
  if (a == "class") return eval::Averaging::kPerClass;
  throw Error(ErrorCode::kConfig, "eval.averaging must be sample or class");
}

Baseline RunConfig::baseline() const {
  return parse_baseline(get<std::string>(json_, "", "baseline"));
}

void RunConfig::validate() const {
  seed();
  const auto source = graph_source();
  if (source != kg::SourceKind::kWordNet) build_policy(kg::SourceKind::kConceptNet);
  if (source != kg::SourceKind::kConceptNet) build_policy(kg::SourceKind::kWordNet);
  seed_mode();
  gnn_config(node_feature_dim(), 1);
  train_plan();
  finetune_plan();
  averaging();
  baseline();
  for (const auto& [key, value] : section("paths").items()) {
    if (key == "run_dir") continue;
    if (path(key) && !fs::exists(*path(key))) {
      throw Error(ErrorCode::kIo, "input file " + path(key)->string() +
                                      " (paths." + key + ") does not exist");
    }
  }
}

std::string RunConfig::name() const {
  const auto n = get<std::string>(json_, "", "name");
  return n.empty() ? "model" : n;
}

std::string RunConfig::hash() const { return sha256_hex(json_.dump()); }

}  // namespace kgzsl::cli
