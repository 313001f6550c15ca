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

#include "kgzsl/trainer/train.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"
#include "kgzsl/numerics/random.h"
#include "kgzsl/numerics/tape.h"

namespace kgzsl::trainer {

namespace ad = numerics::ad;
using numerics::Matrix;
using numerics::ad::Var;

AnchorSplit split_anchors(std::vector<kg::ConceptId> anchors,
                          double val_fraction, uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "val_fraction must lie in (0, 1)");
  }
  if (anchors.size() < 2) {
    throw Error(ErrorCode::kTooFewAnchors,
                "need at least 2 anchors, have " +
                    std::to_string(anchors.size()));
  }
  std::sort(anchors.begin(), anchors.end());
  numerics::Rng rng(seed);
  rng.shuffle(std::span<kg::ConceptId>(anchors));
  const size_t n = anchors.size();
  const auto want =
      static_cast<size_t>(std::llround(static_cast<double>(n) * val_fraction));
  const size_t n_val = std::clamp<size_t>(want, 1, n - 1);
  AnchorSplit s;
  s.val.assign(anchors.begin(), anchors.begin() + static_cast<long>(n_val));
  s.train.assign(anchors.begin() + static_cast<long>(n_val), anchors.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

void TrainPlan::validate() const {
  if (epochs < 0) throw Error(ErrorCode::kConfig, "epochs must be >= 0");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "val_fraction must lie in (0, 1)");
  }
  if (!(optimizer.lr > 0.0)) {
    throw Error(ErrorCode::kConfig, "learning rate must be > 0");
  }
}

size_t select_checkpoint(std::span<const double> val_losses) {
  if (val_losses.empty()) {
    throw Error(ErrorCode::kConfig, "no validation losses to select from");
  }
  size_t best = 0;
  for (size_t i = 1; i < val_losses.size(); ++i) {
    if (val_losses[i] < val_losses[best]) best = i;
  }
  return best;
}

void write_train_log(std::ostream& out, const TrainLog& log) {
  out << "epoch,train_loss,val_loss\n";
  for (const auto& r : log.epochs) {
    out << r.epoch << ',' << format_double(r.train_loss) << ','
        << format_double(r.val_loss) << '\n';
  }
}

EmbeddingTable seed_class_table(const kg::KnowledgeGraph& g,
                                const Matrix& node_embeddings) {
  check_shape(node_embeddings.rows() == g.num_nodes(),
              "node embeddings do not match the graph");
  const auto seeds = g.seeds();
  std::vector<kg::ConceptId> names;
  Matrix m(seeds.size(), node_embeddings.cols());
  for (size_t k = 0; k < seeds.size(); ++k) {
    const auto& node = g.nodes()[seeds[k]];
    names.push_back(node.name);
    const auto src = node_embeddings.row(node.lookup);
    std::copy(src.begin(), src.end(), m.row(k).begin());
  }
  return EmbeddingTable(std::move(names), std::move(m));
}

EmbeddingTable node_table(const kg::KnowledgeGraph& g,
                          const Matrix& node_embeddings) {
  check_shape(node_embeddings.rows() == g.num_nodes(),
              "node embeddings do not match the graph");
  std::vector<kg::ConceptId> names;
  for (const auto& n : g.nodes()) names.push_back(n.name);
  return EmbeddingTable(std::move(names), node_embeddings);
}

namespace {

struct AnchorRows {
  std::vector<size_t> nodes;
  Matrix targets;
};

AnchorRows anchor_rows(const kg::KnowledgeGraph& g, const TargetWeights& t,
                       const std::vector<kg::ConceptId>& names) {
  AnchorRows a{{}, Matrix(names.size(), t.dim())};
  for (size_t k = 0; k < names.size(); ++k) {
    a.nodes.push_back(*g.find(names[k]));
    const auto it = std::lower_bound(t.names.begin(), t.names.end(), names[k]);
    const auto src = t.vectors.row(static_cast<size_t>(it - t.names.begin()));
    std::copy(src.begin(), src.end(), a.targets.row(k).begin());
  }
  return a;
}

double mean_squared_distance(const Matrix& out, const AnchorRows& rows) {
  double total = 0.0;
  for (size_t k = 0; k < rows.nodes.size(); ++k) {
    const auto o = out.row(rows.nodes[k]);
    const auto t = rows.targets.row(k);
    for (size_t j = 0; j < o.size(); ++j) total += (o[j] - t[j]) * (o[j] - t[j]);
  }
  return total / static_cast<double>(rows.nodes.size());
}

std::string graph_digest(const kg::KnowledgeGraph& g) {
  std::ostringstream out;
  kg::write_graph(out, g);
  return sha256_hex(out.str());
}

}  // namespace

TrainResult train_embeddings(const kg::KnowledgeGraph& g,
                             const Matrix& features, gnn::GnnModel model,
                             const TargetWeights& targets,
                             const TrainPlan& plan) {
  plan.validate();
  if (targets.dim() != model.config().output_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "targets have width " + std::to_string(targets.dim()) +
                    " but the model outputs " +
                    std::to_string(model.config().output_dim()));
  }
  TrainResult result;
  std::vector<kg::ConceptId> anchors;
  for (const auto& name : targets.names) {
    if (g.find(name)) {
      anchors.push_back(name);
    } else if (plan.allow_missing_anchors) {
      result.log.dropped_anchors.push_back(name.str());
    } else {
      throw Error(ErrorCode::kAnchorNotInGraph,
                  "anchor '" + name.str() + "' is not a graph node");
    }
  }
  const auto split = split_anchors(anchors, plan.val_fraction, plan.seed);
  const auto train_rows = anchor_rows(g, targets, split.train);
  const auto val_rows = anchor_rows(g, targets, split.val);
  result.log.train_anchors = split.train.size();
  result.log.val_anchors = split.val.size();

  const auto prepared = gnn::PreparedGraph::build(
      gnn::GraphView::from_graph(g), model.config());
  numerics::Optimizer optimizer(plan.optimizer);
  std::vector<gnn::GnnModel::Parameter> best = model.parameters();
  Matrix best_out;
  double best_val = 0.0;

  for (int epoch = 0; epoch <= plan.epochs; ++epoch) {
    ad::Tape tape;
    const auto vars = model.bind(tape);
    const Var out = model.forward(prepared, tape.constant(features), vars);
    const Var loss = ad::mean_squared_l2_loss(
        ad::gather_rows(out, train_rows.nodes),
        tape.constant(train_rows.targets));
    const double train_loss = loss.value()(0, 0);
    const double val_loss = mean_squared_distance(out.value(), val_rows);
    if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) {
      throw Error(ErrorCode::kDivergedLoss,
                  "loss became non-finite at epoch " + std::to_string(epoch));
    }
    result.log.epochs.push_back({epoch, train_loss, val_loss});
    if (epoch == 0 || val_loss < best_val) {
      best_val = val_loss;
      best = model.parameters();
      best_out = out.value();
      result.log.best_epoch = epoch;
    }
    if (epoch == plan.epochs) break;
    tape.backward(loss);
    std::vector<Matrix> params;
    std::vector<Matrix> grads;
    for (size_t i = 0; i < vars.size(); ++i) {
      params.push_back(std::move(model.parameters()[i].value));
      grads.push_back(tape.grad(vars[i]));
    }
    optimizer.step(params, grads);
    for (size_t i = 0; i < vars.size(); ++i) {
      if (!params[i].all_finite()) {
        throw Error(ErrorCode::kDivergedLoss,
                    "parameters became non-finite at epoch " +
                        std::to_string(epoch + 1));
      }
      model.parameters()[i].value = std::move(params[i]);
    }
  }
  result.log.best_val_loss = best_val;
  model.parameters() = std::move(best);
  result.model = std::move(model);
  result.node_embeddings = std::move(best_out);
  result.table = seed_class_table(g, result.node_embeddings);

  nlohmann::json provenance;
  provenance["kind"] = "trained";
  provenance["graph_sha256"] = graph_digest(g);
  provenance["architecture"] =
      std::string(gnn::architecture_name(result.model.config().architecture));
  provenance["layer_dims"] = result.model.config().layer_dims;
  provenance["seed"] = plan.seed;
  provenance["epochs"] = plan.epochs;
  provenance["optimizer"] = numerics::optimizer_kind_name(plan.optimizer.kind);
  provenance["lr"] = plan.optimizer.lr;
  provenance["best_epoch"] = result.log.best_epoch;
  provenance["best_val_loss"] = best_val;
  result.table.provenance() = std::move(provenance);
  return result;
}

}  // namespace kgzsl::trainer
