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

#include "kgzsl/cli/commands.h"

#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgzsl/cli/config.h"
#include "kgzsl/cli/pipeline.h"
#include "kgzsl/cli/synth.h"
#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::cli {

namespace fs = std::filesystem;

namespace {

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kUsage:
      return "usage";
    case ErrorCategory::kData:
      return "data";
    case ErrorCategory::kNumeric:
      return "numeric";
  }
  return "usage";
}

int report(std::ostream& err, ErrorCode code, const std::string& message) {
  const ErrorCategory c = error_category(code);
  const nlohmann::json record = {{"error", error_code_name(code)},
                                 {"category", category_name(c)},
                                 {"message", message}};
  err << record.dump() << '\n';
  return static_cast<int>(c);
}

struct ConfigOptions {
  std::string file;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigOptions& o) {
  cmd->add_option("-c,--config", o.file, "Run configuration (JSON)")
      ->required();
  cmd->add_option("--set", o.overrides, "Override, e.g. train.epochs=200")
      ->take_all();
}

RunConfig load(const ConfigOptions& o) {
  RunConfig config = RunConfig::load(o.file);
  for (const auto& s : o.overrides) config.apply_override(s);
  return config;
}

void print_graph_stats(std::ostream& out, const kg::KnowledgeGraph& g) {
  const auto stats = kg::graph_stats(g);
  out << "N,E,RT\n"
      << stats.nodes << ',' << stats.edges << ',' << stats.relation_types
      << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Object-agnostic zero-shot state classification with "
               "knowledge-graph class embeddings",
               "kgzsl"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  ConfigOptions opts;
  auto* build = app.add_subcommand("build-graph", "Expand the knowledge graph");
  auto* stats = app.add_subcommand("graph-stats", "Print N,E,RT of a graph");
  auto* train = app.add_subcommand("train-embeddings",
                                   "Train the GNN and export class embeddings");
  auto* finetune = app.add_subcommand("finetune",
                                      "Fit the adapter under the frozen head");
  auto* predict = app.add_subcommand("predict", "Score the test split");
  auto* evaluate = app.add_subcommand("evaluate", "Bias sweep and metrics");
  auto* ablate = app.add_subcommand("ablate", "Run the ablation grid");
  auto* synth = app.add_subcommand("synth", "Write a synthetic world");
  for (auto* cmd : {build, train, finetune, predict, evaluate, ablate}) {
    add_config_options(cmd, opts);
  }
  std::string graph_file;
  auto* stats_graph =
      stats->add_option("--graph", graph_file, "Graph file (graph.kg)");
  stats->add_option("-c,--config", opts.file, "Run configuration (JSON)")
      ->excludes(stats_graph);
  stats->add_option("--set", opts.overrides, "Override")->take_all();
  int workers = 0;
  ablate->add_option("--workers", workers, "Worker threads (0: from config)")
      ->check(CLI::NonNegativeNumber);
  uint64_t synth_seed = 0;
  std::string synth_out;
  synth->add_option("--seed", synth_seed, "World seed")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    return report(err, ErrorCode::kUsage, e.what());
  }

  try {
    if (*synth) {
      SynthSpec spec;
      spec.seed = synth_seed;
      write_synth_world(make_synth_world(spec), synth_out);
      out << "wrote " << (fs::path(synth_out) / "config.json").string()
          << '\n';
    } else if (*stats) {
      if (!graph_file.empty()) {
        std::istringstream in(read_file(graph_file));
        print_graph_stats(out, kg::read_graph(in));
      } else if (!opts.file.empty()) {
        print_graph_stats(out, build_graph(load(opts)));
      } else {
        return report(err, ErrorCode::kUsage,
                      "graph-stats needs --graph or --config");
      }
    } else if (*build) {
      const auto r = run_build_graph(load(opts));
      out << "wrote " << r.outputs.front().string() << '\n';
    } else if (*train) {
      run_train_embeddings(load(opts));
    } else if (*finetune) {
      run_finetune(load(opts));
    } else if (*predict) {
      run_predict(load(opts));
    } else if (*evaluate) {
      const RunConfig config = load(opts);
      eval::MetricsRow row;
      run_evaluate(config, &row);
      eval::write_report_markdown(out, {{config.name(), row}});
    } else if (*ablate) {
      const RunConfig config = load(opts);
      size_t n = static_cast<size_t>(workers);
      if (n == 0) {
        n = config.json().at("ablate").value("workers", size_t{1});
      }
      const auto results = run_ablation(config, n);
      std::vector<eval::NamedRow> rows;
      size_t failed = 0;
      for (const auto& r : results) {
        if (r.row) {
          rows.push_back({r.point.name(), *r.row});
        } else {
          ++failed;
        }
      }
      eval::write_report_markdown(out, rows);
      if (failed) {
        err << failed << " of " << results.size()
            << " grid points failed; see failures.json\n";
      }
    }
  } catch (const Error& e) {
    return report(err, e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return report(err, ErrorCode::kConfig, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report(err, ErrorCode::kIo, e.what());
  }
  return 0;
}

}  // namespace kgzsl::cli
