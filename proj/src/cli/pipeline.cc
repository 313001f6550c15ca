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

#include "kgzsl/cli/pipeline.h"

#include <atomic>
#include <chrono>
#include <functional>
#include <sstream>
#include <thread>

#include "kgzsl/common/text.h"
#include "kgzsl/gnn/features.h"
#include "kgzsl/gnn/model.h"
#include "kgzsl/kg/builder.h"
#include "kgzsl/kg/source.h"
#include "kgzsl/kg/taxonomy.h"
#include "kgzsl/numerics/random.h"
#include "kgzsl/trainer/baselines.h"
#include "kgzsl/trainer/embedding_table.h"
#include "kgzsl/trainer/train.h"
#include "kgzsl/zsl/dataset.h"
#include "kgzsl/zsl/head.h"

namespace kgzsl::cli {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using numerics::Rng;

namespace {

// Derived seed stream of each stage.
enum Stream : uint64_t {
  kNodeFeatureStream = 1,
  kModelInitStream = 2,
  kRandomBaselineStream = 5,
  kUnrelatedStream = 7,
  kAdapterInitStream = 8,
};

std::istringstream open(const fs::path& p) {
  return std::istringstream(read_file(p));
}

std::string relative_name(const fs::path& p, const fs::path& base) {
  const fs::path rel = p.lexically_normal().lexically_relative(
      base.lexically_normal());
  return rel.empty() ? p.generic_string() : rel.generic_string();
}

fs::path require_artifact(const RunConfig& config, const char* name) {
  const fs::path p = config.run_dir() / name;
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kIo, "missing stage input " + p.string() +
                                    "; run the earlier command first");
  }
  return p;
}

StageRecord timed(const RunConfig& config, const std::string& command,
                  const std::function<void(StageRecord&)>& body) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(config.run_dir());
  StageRecord record;
  record.command = command;
  body(record);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  record_manifest(config, record, elapsed.count());
  return record;
}

zsl::FeatureDataset load_dataset(const RunConfig& config,
                                 StageRecord& record) {
  const fs::path f = config.required_path("features");
  const fs::path c = config.required_path("classes");
  record.inputs.push_back(f);
  record.inputs.push_back(c);
  auto fi = open(f);
  auto ci = open(c);
  return zsl::read_features(fi, ci);
}

}  // namespace

void record_manifest(const RunConfig& config, const StageRecord& record,
                     double wall_clock_seconds) {
  const fs::path path = config.run_dir() / "manifest.json";
  Json manifest = Json::object();
  if (fs::exists(path)) {
    manifest = Json::parse(read_file(path), nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object()) {
      manifest = Json::object();
    }
  }
  Json entry;
  entry["tool_version"] = kToolVersion;
  entry["config"] = config.json();
  entry["config_sha256"] = config.hash();
  entry["seed"] = config.seed();
  Json inputs = Json::object();
  for (const auto& p : record.inputs) {
    inputs[relative_name(p, config.base_dir())] = sha256_file(p);
  }
  Json outputs = Json::object();
  for (const auto& p : record.outputs) {
    outputs[relative_name(p, config.run_dir())] = sha256_file(p);
  }
  entry["inputs"] = std::move(inputs);
  entry["outputs"] = std::move(outputs);
  entry["wall_clock_seconds"] = wall_clock_seconds;
  manifest[record.command] = std::move(entry);
  write_file(path, manifest.dump(2) + "\n");
}

Json manifest_without_clock(const Json& manifest) {
  Json out = manifest;
  for (auto& [command, entry] : out.items()) {
    if (entry.is_object()) entry.erase("wall_clock_seconds");
  }
  return out;
}

kg::KnowledgeGraph build_graph(const RunConfig& config, Json* sidecar) {
  const fs::path seeds_path = config.required_path("seeds");
  auto seeds_in = open(seeds_path);
  const auto seeds = kg::parse_seed_file(seeds_in);
  std::optional<kg::Taxonomy> taxonomy;
  Json sources = Json::object();
  if (const auto wn = config.path("wordnet")) {
    auto in = open(config.required_path("wordnet"));
    taxonomy = kg::parse_taxonomy(in);
    sources["wordnet"] = sha256_file(*wn);
  }
  const auto source = config.graph_source();
  std::vector<std::string> unresolved;
  Json policies = Json::array();
  const auto expand_part = [&](kg::SourceKind part) {
    const kg::BuildPolicy policy = config.build_policy(part);
    kg::EdgeIndex index;
    if (part == kg::SourceKind::kConceptNet) {
      const fs::path cn = config.required_path("conceptnet");
      auto in = open(cn);
      kg::EdgeDumpOptions options;
      options.language =
          config.json().at("graph").at("language").get<std::string>();
      index = kg::EdgeIndex(kg::parse_edge_dump(in, options).edges);
      sources["conceptnet"] = sha256_file(cn);
    } else {
      if (!taxonomy) {
        throw Error(ErrorCode::kConfig,
                    "a WordNet source needs paths.wordnet");
      }
      index = kg::EdgeIndex(kg::taxonomy_edges(*taxonomy));
    }
    auto result = kg::expand(index, seeds, policy,
                             taxonomy ? &*taxonomy : nullptr,
                             config.seed_mode());
    unresolved.insert(unresolved.end(), result.unresolved.begin(),
                      result.unresolved.end());
    policies.push_back({{"source", kg::source_kind_name(part)},
                        {"hops", policy.max_hops},
                        {"rule", kg::describe_rule(policy.rule)}});
    return std::move(result.graph);
  };
  kg::KnowledgeGraph g;
  if (source == kg::SourceKind::kCombined) {
    g = kg::merge(expand_part(kg::SourceKind::kConceptNet),
                  expand_part(kg::SourceKind::kWordNet));
  } else {
    g = expand_part(source);
  }
  if (sidecar) {
    const auto stats = kg::graph_stats(g);
    Json seed_list = Json::array();
    for (const auto& s : seeds) {
      seed_list.push_back({s.name, kg::seed_label_name(s.label)});
    }
    std::sort(unresolved.begin(), unresolved.end());
    unresolved.erase(std::unique(unresolved.begin(), unresolved.end()),
                     unresolved.end());
    *sidecar = {{"source", kg::source_kind_name(source)},
                {"policies", policies},
                {"source_sha256", sources},
                {"seeds_sha256", sha256_file(seeds_path)},
                {"seeds", seed_list},
                {"unresolved_seeds", unresolved},
                {"nodes", stats.nodes},
                {"edges", stats.edges},
                {"relation_types", stats.relation_types},
                {"per_hop", stats.per_hop}};
  }
  return g;
}

StageRecord run_build_graph(const RunConfig& config) {
  return timed(config, "build-graph", [&](StageRecord& r) {
    Json sidecar;
    const auto g = build_graph(config, &sidecar);
    for (const char* key : {"seeds", "conceptnet", "wordnet"}) {
      if (const auto p = config.path(key)) r.inputs.push_back(*p);
    }
    std::ostringstream out;
    kg::write_graph(out, g);
    const fs::path graph = config.run_dir() / "graph.kg";
    write_file(graph, out.str());
    write_file(graph.string() + ".json", sidecar.dump(2) + "\n");
    r.outputs = {graph, graph.string() + ".json"};
  });
}

StageRecord run_train_embeddings(const RunConfig& config) {
  return timed(config, "train-embeddings", [&](StageRecord& r) {
    const fs::path graph_path = require_artifact(config, "graph.kg");
    const fs::path anchors = config.required_path("anchors");
    r.inputs = {graph_path, anchors};
    auto gi = open(graph_path);
    const auto g = kg::read_graph(gi);
    auto ai = open(anchors);
    const auto targets = trainer::read_targets(ai);
    const uint64_t seed = config.seed();
    const fs::path dir = config.run_dir();

    trainer::TrainLog log;
    trainer::EmbeddingTable table;
    if (config.baseline() == Baseline::kRandom) {
      std::vector<kg::ConceptId> classes;
      for (size_t s : g.seeds()) classes.push_back(g.nodes()[s].name);
      table = trainer::random_table(
          classes, targets.dim(),
          Rng::derive_seed(seed, kRandomBaselineStream));
      std::ostringstream gs;
      kg::write_graph(gs, g);
      table.provenance()["graph_sha256"] = sha256_hex(gs.str());
    } else {
      gnn::ConceptVectors vectors;
      if (const auto nv = config.path("node_vectors")) {
        auto in = open(config.required_path("node_vectors"));
        vectors = gnn::read_concept_vectors(in);
        r.inputs.push_back(*nv);
      }
      Rng feature_rng(Rng::derive_seed(seed, kNodeFeatureStream));
      const auto features = gnn::assemble_node_features(
          g, vectors, config.node_feature_dim(), feature_rng);
      Rng init_rng(Rng::derive_seed(seed, kModelInitStream));
      auto model = gnn::GnnModel::init(
          config.gnn_config(config.node_feature_dim(), targets.dim()),
          g.relations().size(), init_rng);
      auto result = trainer::train_embeddings(g, features.matrix,
                                              std::move(model), targets,
                                              config.train_plan());
      log = std::move(result.log);
      table = std::move(result.table);
      std::ostringstream ckpt;
      gnn::write_checkpoint(ckpt, result.model);
      write_file(dir / "gnn.ckpt", ckpt.str());
      r.outputs.push_back(dir / "gnn.ckpt");
      if (config.baseline() == Baseline::kUnrelated) {
        const auto mapping = trainer::choose_unrelated_mapping(
            g, Rng::derive_seed(seed, kUnrelatedStream));
        std::vector<kg::ConceptId> classes;
        for (const auto& [cls, target] : mapping) classes.push_back(cls);
        auto provenance = table.provenance();
        table = trainer::unrelated_table(
            trainer::node_table(g, result.node_embeddings), classes, mapping);
        provenance["kind"] = "unrelated";
        provenance["mapping"] = table.provenance()["mapping"];
        table.provenance() = std::move(provenance);
      }
    }
    trainer::write_embedding_table(dir / "embeddings.tsv", table);
    std::ostringstream log_out;
    trainer::write_train_log(log_out, log);
    write_file(dir / "log.csv", log_out.str());
    r.outputs.push_back(dir / "embeddings.tsv");
    r.outputs.push_back(dir / "embeddings.tsv.json");
    r.outputs.push_back(dir / "log.csv");
  });
}

StageRecord run_finetune(const RunConfig& config) {
  return timed(config, "finetune", [&](StageRecord& r) {
    const fs::path emb = require_artifact(config, "embeddings.tsv");
    r.inputs.push_back(emb);
    const auto table = trainer::read_embedding_table(emb);
    const auto dataset = load_dataset(config, r);
    auto head = zsl::assemble_head(
        table, dataset, Rng::derive_seed(config.seed(), kAdapterInitStream));
    const auto result =
        zsl::finetune_adapter(std::move(head), dataset, config.finetune_plan());
    const fs::path dir = config.run_dir();
    std::ostringstream head_out, log_out;
    zsl::write_head(head_out, result.head);
    zsl::write_finetune_log(log_out, result.log);
    write_file(dir / "head.txt", head_out.str());
    write_file(dir / "finetune_log.csv", log_out.str());
    r.outputs = {dir / "head.txt", dir / "finetune_log.csv"};
  });
}

StageRecord run_predict(const RunConfig& config) {
  return timed(config, "predict", [&](StageRecord& r) {
    const fs::path head_path = require_artifact(config, "head.txt");
    r.inputs.push_back(head_path);
    auto hi = open(head_path);
    const auto head = zsl::read_head(hi);
    const auto dataset = load_dataset(config, r);
    const auto scores = zsl::score_split(head, dataset, zsl::Split::kTest);
    const fs::path dir = config.run_dir();
    std::ostringstream s, m;
    eval::write_scores(s, scores);
    eval::write_class_manifest(m, scores);
    write_file(dir / "scores.tsv", s.str());
    write_file(dir / "scores.classes.tsv", m.str());
    r.outputs = {dir / "scores.tsv", dir / "scores.classes.tsv"};
  });
}

bool metric_bounds_hold(const eval::MetricsRow& row) {
  constexpr double kSlack = 1e-12;
  return row.best_hm <=
             eval::harmonic_mean(row.best_seen, row.best_unseen) + kSlack &&
         row.auc <= row.best_seen * row.best_unseen + kSlack;
}

StageRecord run_evaluate(const RunConfig& config, eval::MetricsRow* row_out) {
  return timed(config, "evaluate", [&](StageRecord& r) {
    const fs::path scores_path = require_artifact(config, "scores.tsv");
    const fs::path classes_path =
        require_artifact(config, "scores.classes.tsv");
    r.inputs = {scores_path, classes_path};
    auto si = open(scores_path);
    auto ci = open(classes_path);
    const auto scores = eval::read_scores(si, ci);
    const auto curve = eval::bias_sweep(scores, config.averaging());
    const auto row = eval::summarize(curve);
    if (!metric_bounds_hold(row)) {
      throw Error(ErrorCode::kMetricBounds,
                  "metrics break the harmonic-mean or AUC bound");
    }
    const std::vector<eval::NamedRow> rows{{config.name(), row}};
    const fs::path dir = config.run_dir();
    std::ostringstream curve_out, metrics_out, report_out;
    eval::write_curve(curve_out, curve);
    eval::write_metrics_csv(metrics_out, rows);
    eval::write_report_markdown(report_out, rows);
    write_file(dir / "curve.tsv", curve_out.str());
    write_file(dir / "metrics.csv", metrics_out.str());
    write_file(dir / "report.md", report_out.str());
    r.outputs = {dir / "curve.tsv", dir / "metrics.csv", dir / "report.md"};
    if (row_out) *row_out = row;
  });
}

eval::MetricsRow run_pipeline(const RunConfig& config) {
  run_build_graph(config);
  run_train_embeddings(config);
  run_finetune(config);
  run_predict(config);
  eval::MetricsRow row;
  run_evaluate(config, &row);
  return row;
}

std::string GridPoint::name() const {
  std::string n = std::string(gnn::architecture_name(architecture)) + " " +
                  std::string(kg::source_kind_name(source)) + "_H" +
                  std::to_string(hops);
  if (threshold) n += "_TH";
  if (baseline != Baseline::kNone) n += "_" + std::string(baseline_name(baseline));
  return n;
}

std::string GridPoint::slug() const {
  std::string s = name();
  for (char& c : s) {
    if (c == ' ') c = '_';
    if (c == '+') c = 'p';
  }
  return s;
}

std::vector<GridPoint> enumerate_grid(const RunConfig& config,
                                      std::vector<std::string>* skipped) {
  const Json& a = config.json().at("ablate");
  const auto strings = [&](const char* key) {
    try {
      return a.at(key).get<std::vector<std::string>>();
    } catch (const Json::exception&) {
      throw Error(ErrorCode::kConfig,
                  std::string("ablate.") + key + " must be a list of strings");
    }
  };
  std::vector<int> hops;
  try {
    hops = a.at("hops").get<std::vector<int>>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kConfig, "ablate.hops must be a list of integers");
  }
  const bool have_taxonomy = config.path("wordnet").has_value();
  std::vector<GridPoint> grid;
  for (const auto& arch : strings("architectures")) {
    for (const auto& source : strings("sources")) {
      for (int h : hops) {
        for (const auto& policy : strings("policies")) {
          for (const auto& baseline : strings("baselines")) {
            GridPoint p;
            p.architecture = gnn::parse_architecture(arch);
            p.source = kg::parse_source_kind(source);
            p.hops = h;
            if (policy != "All" && policy != "TH") {
              throw Error(ErrorCode::kConfig,
                          "ablate.policies entries must be All or TH");
            }
            p.threshold = policy == "TH";
            p.baseline = parse_baseline(baseline);
            if (p.source != kg::SourceKind::kConceptNet && !have_taxonomy) {
              if (skipped) skipped->push_back(p.name() + ": needs a taxonomy");
              continue;
            }
            grid.push_back(p);
          }
        }
      }
    }
  }
  return grid;
}

RunConfig point_config(const RunConfig& base, const GridPoint& p,
                       const fs::path& dir) {
  RunConfig c = base;
  Json& j = c.json();
  j["name"] = p.name();
  j["gnn"]["architecture"] = gnn::architecture_name(p.architecture);
  j["graph"]["source"] = kg::source_kind_name(p.source);
  j["graph"]["hops"] = p.hops;
  j["graph"]["rule"] = p.threshold ? "TH" : "all";
  j["baseline"] = baseline_name(p.baseline);
  j["paths"]["run_dir"] = fs::absolute(dir).lexically_normal().string();
  return c;
}

std::vector<PointResult> run_ablation(const RunConfig& config,
                                      size_t workers) {
  config.validate();
  std::vector<std::string> skipped;
  const auto grid = enumerate_grid(config, &skipped);
  const fs::path root = config.run_dir();
  fs::create_directories(root / "ablation");
  std::vector<PointResult> results(grid.size());
  std::atomic<size_t> next{0};
  const auto work = [&] {
    for (size_t i = next++; i < grid.size(); i = next++) {
      PointResult& out = results[i];
      out.point = grid[i];
      const fs::path dir = root / "ablation" / grid[i].slug();
      try {
        out.row = run_pipeline(point_config(config, grid[i], dir));
      } catch (const Error& e) {
        out.error = e.code();
        out.message = e.what();
      } catch (const std::exception& e) {
        out.error = ErrorCode::kIo;
        out.message = e.what();
      }
      if (out.error) {
        fs::create_directories(dir);
        const Json record = {{"point", grid[i].name()},
                             {"error", error_code_name(*out.error)},
                             {"message", out.message}};
        write_file(dir / "error.json", record.dump(2) + "\n");
      }
    }
  };
  const size_t n = std::max<size_t>(1, std::min(workers, grid.size()));
  std::vector<std::thread> pool;
  for (size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<eval::NamedRow> rows;
  Json failures = Json::array();
  for (const auto& r : results) {
    if (r.row) {
      rows.push_back({r.point.name(), *r.row});
    } else {
      failures.push_back({{"point", r.point.name()},
                          {"error", error_code_name(*r.error)},
                          {"message", r.message}});
    }
  }
  std::ostringstream csv, md, metrics;
  eval::write_report_csv(csv, rows);
  eval::write_report_markdown(md, rows);
  eval::write_metrics_csv(metrics, rows);
  write_file(root / "report.csv", csv.str());
  write_file(root / "report.md", md.str());
  write_file(root / "metrics.csv", metrics.str());
  write_file(root / "failures.json",
             Json({{"failures", failures}, {"skipped", skipped}}).dump(2) +
                 "\n");
  return results;
}

}  // namespace kgzsl::cli
