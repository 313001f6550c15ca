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

#ifndef KGZSL_TRAINER_TRAIN_H_
#define KGZSL_TRAINER_TRAIN_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "kgzsl/gnn/model.h"
#include "kgzsl/kg/graph.h"
#include "kgzsl/numerics/matrix.h"
#include "kgzsl/numerics/optim.h"
#include "kgzsl/trainer/embedding_table.h"

namespace kgzsl::trainer {

struct AnchorSplit {
  std::vector<kg::ConceptId> train;
  std::vector<kg::ConceptId> val;
};

// Seeded shuffle, then the first round(n * val_fraction) anchors (clamped to
// [1, n - 1]) go to validation. Both halves are returned sorted. Throws
// kTooFewAnchors below two anchors and kConfig for a fraction outside (0, 1).
AnchorSplit split_anchors(std::vector<kg::ConceptId> anchors,
                          double val_fraction, uint64_t seed);

struct TrainPlan {
  int epochs = 1000;
  double val_fraction = 0.05;
  uint64_t seed = 0;
  numerics::OptimizerSpec optimizer;
  // Drop targets whose concept is not a graph node instead of failing.
  bool allow_missing_anchors = false;

  void validate() const;  // kConfig
};

struct EpochRecord {
  int epoch = 0;  // number of optimizer updates applied so far
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  size_t train_anchors = 0;
  size_t val_anchors = 0;
  std::vector<std::string> dropped_anchors;
};

// Index of the smallest value; the earliest wins on ties.
size_t select_checkpoint(std::span<const double> val_losses);

// CSV `epoch,train_loss,val_loss`.
void write_train_log(std::ostream& out, const TrainLog& log);

struct TrainResult {
  gnn::GnnModel model;         // parameters of the best epoch
  numerics::Matrix node_embeddings;  // all nodes, best epoch
  EmbeddingTable table;        // seed classes only
  TrainLog log;
};

// Full-batch regression of the anchor outputs onto the targets. Row e of
// the log holds both losses for the parameters after e updates, so the
// initial parameters are a checkpoint candidate too. Throws
// kAnchorNotInGraph, kDimMismatch, kTooFewAnchors, kDivergedLoss.
TrainResult train_embeddings(const kg::KnowledgeGraph& g,
                             const numerics::Matrix& features,
                             gnn::GnnModel model, const TargetWeights& targets,
                             const TrainPlan& plan);

// Embeddings of the seed classes, each read through its lookup node.
EmbeddingTable seed_class_table(const kg::KnowledgeGraph& g,
                                const numerics::Matrix& node_embeddings);
// Embeddings of every node by name.
EmbeddingTable node_table(const kg::KnowledgeGraph& g,
                          const numerics::Matrix& node_embeddings);

}  // namespace kgzsl::trainer

#endif  // KGZSL_TRAINER_TRAIN_H_
