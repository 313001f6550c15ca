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

#ifndef KGZSL_ZSL_HEAD_H_
#define KGZSL_ZSL_HEAD_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "kgzsl/eval/scores.h"
#include "kgzsl/numerics/matrix.h"
#include "kgzsl/numerics/optim.h"
#include "kgzsl/trainer/embedding_table.h"
#include "kgzsl/zsl/dataset.h"

namespace kgzsl::zsl {

// Linear classifier whose class weights are frozen embeddings. Features
// pass through the affine adapter x -> x A + b before the inner product.
struct ClassifierHead {
  std::vector<kg::ConceptId> classes;  // seen block, then unseen block
  size_t num_seen = 0;
  numerics::Matrix class_matrix;  // classes x D, never updated
  numerics::Matrix adapter;       // F x D
  numerics::Matrix bias;          // 1 x D

  size_t feature_dim() const { return adapter.rows(); }
  size_t embedding_dim() const { return class_matrix.cols(); }
  std::vector<bool> seen_mask() const;
};

// Throws kMissingClassEmbedding naming the first absent class and
// kDimMismatch when the table width is zero.
ClassifierHead assemble_head(const trainer::EmbeddingTable& table,
                             const FeatureDataset& dataset, uint64_t seed);

struct FinetunePlan {
  int epochs = 50;
  size_t batch_size = 32;  // 0 means full batch
  uint64_t seed = 0;
  numerics::OptimizerSpec optimizer{numerics::OptimizerKind::kSgdMomentum,
                                    1e-4, 0.9};

  void validate() const;  // kConfig
};

struct FinetuneEpoch {
  int epoch = 0;
  double train_loss = 0.0;  // mean over the epoch's batches
  std::optional<double> val_seen_accuracy;
};

struct FinetuneResult {
  ClassifierHead head;
  std::vector<FinetuneEpoch> log;
};

// Cross-entropy over the seen logits of the train split. Throws
// kEmptyTrainSplit, kUnseenLabelInTrain, kDimMismatch, kDivergedLoss.
FinetuneResult finetune_adapter(ClassifierHead head,
                                const FeatureDataset& dataset,
                                const FinetunePlan& plan);

void write_finetune_log(std::ostream& out,
                        const std::vector<FinetuneEpoch>& log);

// Loss of one batch and the gradients it sends to every head matrix,
// class_matrix included (which fine-tuning never applies).
struct HeadGradients {
  double loss = 0.0;
  numerics::Matrix adapter;
  numerics::Matrix bias;
  numerics::Matrix class_matrix;
};

HeadGradients head_gradients(const ClassifierHead& head,
                             const numerics::Matrix& features,
                             const std::vector<size_t>& labels);

// features x classes; kDimMismatch on a width mismatch.
numerics::Matrix predict_scores(const ClassifierHead& head,
                                const numerics::Matrix& features);

// Scores of every item in `split`, labelled in head class order.
eval::ScoreSet score_split(const ClassifierHead& head,
                           const FeatureDataset& dataset, Split split);

// Plain-text head: class order, then the three matrices.
void write_head(std::ostream& out, const ClassifierHead& head);
ClassifierHead read_head(std::istream& in);

}  // namespace kgzsl::zsl

#endif  // KGZSL_ZSL_HEAD_H_
