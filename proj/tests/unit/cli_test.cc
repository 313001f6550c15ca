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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "kgzsl/cli/commands.h"
#include "kgzsl/cli/config.h"
#include "kgzsl/cli/pipeline.h"
#include "kgzsl/cli/synth.h"
#include "kgzsl/common/text.h"

namespace kgzsl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "kgzsl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kgzsl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Seed s, one strong edge s-x and a weak edge x-y.
fs::path three_node_fixture(const std::string& name) {
  const fs::path dir = fresh_dir(name);
  write_file(dir / "cn.tsv", "s\tRelatedTo\tx\t2.0\nx\tRelatedTo\ty\t0.5\n");
  write_file(dir / "seeds.tsv", "s\tseen\n");
  const json config = {{"seed", 1},
                       {"paths", {{"conceptnet", "cn.tsv"},
                                  {"seeds", "seeds.tsv"}}},
                       {"graph", {{"hops", 2}, {"rule", "all"}}}};
  write_file(dir / "config.json", config.dump());
  return dir;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).generic_string()] =
          read_file(e.path());
    }
  }
  return files;
}

// Small world and short schedules so each pipeline run takes well under a
// second.
fs::path small_world(const std::string& name) {
  const fs::path dir = fresh_dir(name);
  SynthSpec spec;
  spec.seed = 3;
  spec.num_objects = 12;
  spec.num_distractors = 4;
  spec.train_samples = 40;
  spec.val_samples = 10;
  spec.test_samples = 40;
  write_synth_world(make_synth_world(spec), dir);
  RunConfig config = RunConfig::load(dir / "config.json");
  json j = config.json();
  j["train"]["epochs"] = 20;
  j["finetune"]["epochs"] = 3;
  j["gnn"]["hidden"] = {8};
  write_file(dir / "config.json", j.dump(2));
  return dir;
}

TEST(CliTest, GraphStatsOnThreeNodeFixture) {
  const fs::path dir = three_node_fixture("stats");
  const std::string config = (dir / "config.json").string();
  const Outcome direct = run({"graph-stats", "--config", config});
  ASSERT_EQ(direct.code, 0) << direct.err;
  EXPECT_EQ(direct.out, "N,E,RT\n3,2,1\n");

  ASSERT_EQ(run({"build-graph", "-c", config}).code, 0);
  const Outcome stored =
      run({"graph-stats", "--graph", (dir / "run" / "graph.kg").string()});
  ASSERT_EQ(stored.code, 0) << stored.err;
  EXPECT_EQ(stored.out, "N,E,RT\n3,2,1\n");
}

TEST(CliTest, OverridesReachTheGraph) {
  const fs::path dir = three_node_fixture("override");
  const Outcome one_hop = run({"graph-stats", "-c",
                               (dir / "config.json").string(), "--set",
                               "graph.hops=1"});
  ASSERT_EQ(one_hop.code, 0) << one_hop.err;
  EXPECT_EQ(one_hop.out, "N,E,RT\n2,1,1\n");
  const Outcome threshold =
      run({"graph-stats", "-c", (dir / "config.json").string(), "--set",
           "graph.rule=TH", "--set", "graph.min_weight=1.0"});
  ASSERT_EQ(threshold.code, 0) << threshold.err;
  EXPECT_EQ(threshold.out, "N,E,RT\n2,1,1\n");
}

TEST(CliTest, ErrorsCarryCategoryAndRecord) {
  const Outcome usage = run({"no-such-command"});
  EXPECT_EQ(usage.code, 1);
  const json record = json::parse(usage.err);
  EXPECT_EQ(record["category"], "usage");
  EXPECT_EQ(record["error"], "Usage");

  const fs::path dir = three_node_fixture("errors");
  const std::string config = (dir / "config.json").string();
  const Outcome unknown = run({"build-graph", "-c", config, "--set",
                               "graph.bogus=3"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_EQ(json::parse(unknown.err)["error"], "Config");

  const Outcome no_seed =
      run({"build-graph", "-c", config, "--set", "seed=null"});
  EXPECT_EQ(no_seed.code, 1);

  write_file(dir / "cn.tsv", "s\tRelatedTo\tx\n");
  const Outcome malformed = run({"build-graph", "-c", config});
  EXPECT_EQ(malformed.code, 2);
  EXPECT_EQ(json::parse(malformed.err)["category"], "data");

  const Outcome missing_stage = run({"finetune", "-c", config});
  EXPECT_NE(missing_stage.code, 0);
}

TEST(CliTest, SynthIsByteIdentical) {
  const fs::path a = fresh_dir("synth_a");
  const fs::path b = fresh_dir("synth_b");
  ASSERT_EQ(run({"synth", "--seed", "7", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"synth", "--seed", "7", "--out", b.string()}).code, 0);
  const auto sa = snapshot(a);
  EXPECT_EQ(sa.size(), 9u);
  EXPECT_EQ(sa, snapshot(b));
  const fs::path c = fresh_dir("synth_c");
  ASSERT_EQ(run({"synth", "--seed", "8", "--out", c.string()}).code, 0);
  EXPECT_NE(sa.at("features.tsv"), snapshot(c).at("features.tsv"));
}

TEST(CliTest, SynthWorldShape) {
  SynthSpec spec;
  spec.seed = 11;
  const SynthWorld w = make_synth_world(spec);
  EXPECT_EQ(w.seeds.size(), 8u);
  EXPECT_EQ(w.dataset.classes.seen.size(), 5u);
  EXPECT_EQ(w.dataset.classes.unseen.size(), 3u);
  EXPECT_EQ(w.dataset.in_split(zsl::Split::kTrain).size(), 200u);
  EXPECT_EQ(w.dataset.in_split(zsl::Split::kTest).size(), 200u);
  EXPECT_EQ(w.truth.size(), 8u);
  EXPECT_EQ(w.node_vectors.size(), spec.num_attributes);
  // Every unseen class reaches a seen class within two hops.
  for (const auto& s : w.seeds) {
    if (s.label != kg::SeedLabel::kUnseen) continue;
    bool linked = false;
    for (const auto& e : w.edges) {
      if (e.start.str() == s.name && e.relation.label == "SimilarTo") {
        linked = e.end.str().rfind("seen_", 0) == 0;
      }
    }
    EXPECT_TRUE(linked) << s.name;
  }
}

TEST(CliTest, PipelineRerunIsByteIdentical) {
  const fs::path dir = small_world("rerun");
  const std::string config = (dir / "config.json").string();
  for (const char* cmd : {"build-graph", "train-embeddings", "finetune",
                          "predict", "evaluate"}) {
    const Outcome o = run({cmd, "-c", config});
    ASSERT_EQ(o.code, 0) << cmd << ": " << o.err;
  }
  auto first = snapshot(dir / "run");
  for (const char* cmd : {"build-graph", "train-embeddings", "finetune",
                          "predict", "evaluate"}) {
    ASSERT_EQ(run({cmd, "-c", config}).code, 0) << cmd;
  }
  auto second = snapshot(dir / "run");
  ASSERT_EQ(first.size(), second.size());
  for (const auto& [name, text] : first) {
    if (name == "manifest.json") continue;
    EXPECT_EQ(text, second.at(name)) << name;
  }
  const json m1 = json::parse(first.at("manifest.json"));
  const json m2 = json::parse(second.at("manifest.json"));
  EXPECT_EQ(manifest_without_clock(m1), manifest_without_clock(m2));
  for (const char* cmd : {"build-graph", "train-embeddings", "finetune",
                          "predict", "evaluate"}) {
    ASSERT_TRUE(m1.contains(cmd)) << cmd;
    EXPECT_TRUE(m1[cmd].contains("wall_clock_seconds"));
    EXPECT_EQ(m1[cmd]["seed"], 3);
  }
  // Every recorded output digest matches the file on disk.
  for (const auto& [name, digest] : m1["evaluate"]["outputs"].items()) {
    EXPECT_EQ(digest, sha256_file(dir / "run" / name)) << name;
  }
  for (const char* artifact : {"graph.kg", "embeddings.tsv", "scores.tsv",
                               "curve.tsv", "metrics.csv", "log.csv"}) {
    EXPECT_TRUE(first.count(artifact)) << artifact;
  }
}

TEST(CliTest, AblateTwoArchitecturesGivesTwoRows) {
  const fs::path dir = small_world("ablate");
  const std::string config = (dir / "config.json").string();
  const Outcome o = run({"ablate", "-c", config, "--set",
                         "ablate.architectures=[\"GCN\",\"Tr-GCN\"]", "--set",
                         "ablate.sources=[\"CN\"]", "--set",
                         "ablate.hops=[2]", "--set",
                         "ablate.policies=[\"All\"]", "--set",
                         "ablate.baselines=[\"none\"]", "--workers", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream csv(read_file(dir / "run" / "report.csv"));
  std::vector<std::string> lines;
  for (std::string line; std::getline(csv, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "Model,Seen,Unseen,HM,AUC");
  EXPECT_EQ(lines[1].rfind("GCN CN_H2,", 0), 0u) << lines[1];
  EXPECT_EQ(lines[2].rfind("Tr-GCN CN_H2,", 0), 0u) << lines[2];

  // The report is a function of the saved rows alone.
  std::istringstream saved(read_file(dir / "run" / "metrics.csv"));
  const auto rows = eval::read_metrics_csv(saved);
  std::ostringstream again;
  eval::write_report_csv(again, rows);
  EXPECT_EQ(again.str(), read_file(dir / "run" / "report.csv"));
  // And each point's own metrics row agrees with the consolidated one.
  std::istringstream point(
      read_file(dir / "run" / "ablation" / "GCN_CN_H2" / "metrics.csv"));
  const auto point_rows = eval::read_metrics_csv(point);
  ASSERT_EQ(point_rows.size(), 1u);
  EXPECT_EQ(point_rows[0].row.auc, rows[0].row.auc);
}

TEST(CliTest, AblateRecordsFailuresAndSkipsInfeasiblePoints) {
  const fs::path dir = small_world("ablate_fail");
  RunConfig config = RunConfig::load(dir / "config.json");
  json& j = config.json();
  j["paths"]["wordnet"] = "";
  j["graph"]["min_weight"] = 100.0;  // TH keeps only the seeds
  j["ablate"] = {{"architectures", {"GCN"}},
                 {"sources", {"CN", "WN"}},
                 {"hops", {2}},
                 {"policies", {"All", "TH"}},
                 {"baselines", {"none"}},
                 {"workers", 1}};
  const auto results = run_ablation(config, 1);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_TRUE(results[0].row.has_value()) << results[0].message;
  EXPECT_FALSE(results[1].row.has_value());
  EXPECT_TRUE(results[1].error.has_value());
  EXPECT_TRUE(fs::exists(dir / "run" / "ablation" / "GCN_CN_H2_TH" /
                         "error.json"));
  const json failures =
      json::parse(read_file(dir / "run" / "failures.json"));
  EXPECT_EQ(failures["failures"].size(), 1u);
  EXPECT_EQ(failures["skipped"].size(), 2u);
}

TEST(CliTest, GridNamesAndOrder) {
  RunConfig config;
  config.json()["seed"] = 1;
  config.json()["paths"]["wordnet"] = "wn.tsv";
  config.json()["ablate"]["architectures"] = {"GCN", "Tr-GCN"};
  config.json()["ablate"]["sources"] = {"CN", "CN+WN"};
  config.json()["ablate"]["hops"] = {2, 3};
  config.json()["ablate"]["policies"] = {"All", "TH"};
  config.json()["ablate"]["baselines"] = {"none", "UN"};
  std::vector<std::string> skipped;
  const auto grid = enumerate_grid(config, &skipped);
  ASSERT_EQ(grid.size(), 32u);
  EXPECT_TRUE(skipped.empty());
  EXPECT_EQ(grid[0].name(), "GCN CN_H2");
  EXPECT_EQ(grid[1].name(), "GCN CN_H2_UN");
  EXPECT_EQ(grid[2].name(), "GCN CN_H2_TH");
  EXPECT_EQ(grid[31].name(), "Tr-GCN CN+WN_H3_TH_UN");
  EXPECT_EQ(grid[31].slug(), "Tr-GCN_CNpWN_H3_TH_UN");

  config.json()["paths"]["wordnet"] = "";
  skipped.clear();
  EXPECT_EQ(enumerate_grid(config, &skipped).size(), 16u);
  EXPECT_EQ(skipped.size(), 16u);
}

TEST(CliTest, MetricBounds) {
  EXPECT_TRUE(metric_bounds_hold({0.865, 0.642, 0.456, 0.354}));
  EXPECT_FALSE(metric_bounds_hold({0.5, 0.5, 0.6, 0.1}));
  EXPECT_FALSE(metric_bounds_hold({0.5, 0.5, 0.4, 0.3}));
}

}  // namespace
}  // namespace kgzsl::cli
