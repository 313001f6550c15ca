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

#include "kgzsl/zsl/head.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"
#include "kgzsl/numerics/random.h"
#include "kgzsl/numerics/tape.h"

namespace kgzsl::zsl {

namespace ad = numerics::ad;
using numerics::Matrix;

std::vector<bool> ClassifierHead::seen_mask() const {
  std::vector<bool> mask(classes.size(), false);
  for (size_t c = 0; c < num_seen && c < mask.size(); ++c) mask[c] = true;
  return mask;
}

ClassifierHead assemble_head(const trainer::EmbeddingTable& table,
                             const FeatureDataset& dataset, uint64_t seed) {
  if (table.dim() == 0) {
    throw Error(ErrorCode::kDimMismatch, "embedding table has width 0");
  }
  if (dataset.dim == 0) {
    throw Error(ErrorCode::kDimMismatch, "features have width 0");
  }
  ClassifierHead head;
  head.classes = dataset.classes.class_order();
  head.num_seen = dataset.classes.seen.size();
  head.class_matrix = Matrix(head.classes.size(), table.dim());
  for (size_t c = 0; c < head.classes.size(); ++c) {
    const auto row = table.find(head.classes[c]);
    if (!row) {
      throw Error(ErrorCode::kMissingClassEmbedding,
                  "no embedding for class '" + head.classes[c].str() + "'");
    }
    const auto src = table.vectors().row(*row);
    std::copy(src.begin(), src.end(), head.class_matrix.row(c).begin());
  }
  numerics::Rng rng(seed);
  head.adapter = numerics::glorot_init(dataset.dim, table.dim(), rng);
  head.bias = Matrix(1, table.dim());
  return head;
}

void FinetunePlan::validate() const {
  if (epochs < 0) throw Error(ErrorCode::kConfig, "epochs must be >= 0");
  if (!(optimizer.lr > 0.0)) {
    throw Error(ErrorCode::kConfig, "learning rate must be > 0");
  }
}

namespace {

void check_features(const ClassifierHead& head, const Matrix& features) {
  if (features.cols() != head.feature_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "features have width " + std::to_string(features.cols()) +
                    ", the adapter expects " +
                    std::to_string(head.feature_dim()));
  }
}

ad::Var head_logits(ad::Tape& tape, const Matrix& features, ad::Var adapter,
                    ad::Var bias, ad::Var class_matrix) {
  const ad::Var z =
      ad::add_row_broadcast(ad::matmul(tape.constant(features), adapter), bias);
  return ad::matmul_transposed_b(z, class_matrix);
}

std::vector<size_t> label_indices(const ClassifierHead& head,
                                  const std::vector<const FeatureItem*>& items) {
  std::vector<size_t> labels;
  for (const auto* item : items) {
    const auto it =
        std::find(head.classes.begin(), head.classes.end(), item->label);
    if (it == head.classes.end()) {
      throw Error(ErrorCode::kMissingClassEmbedding,
                  "label '" + item->label.str() + "' is not a head class");
    }
    labels.push_back(static_cast<size_t>(it - head.classes.begin()));
  }
  return labels;
}

double seen_accuracy(const ClassifierHead& head, const Matrix& features,
                     const std::vector<size_t>& labels) {
  const Matrix scores = predict_scores(head, features);
  size_t hits = 0;
  for (size_t i = 0; i < scores.rows(); ++i) {
    size_t best = 0;
    for (size_t c = 1; c < head.num_seen; ++c) {
      if (scores(i, c) > scores(i, best)) best = c;
    }
    if (best == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(scores.rows());
}

double full_loss(const ClassifierHead& head, const Matrix& features,
                 const std::vector<size_t>& labels) {
  ad::Tape tape;
  const ad::Var logits =
      head_logits(tape, features, tape.constant(head.adapter),
                  tape.constant(head.bias), tape.constant(head.class_matrix));
  return ad::cross_entropy_from_logits(logits, labels, head.seen_mask())
      .value()(0, 0);
}

}  // namespace

HeadGradients head_gradients(const ClassifierHead& head,
                             const Matrix& features,
                             const std::vector<size_t>& labels) {
  check_features(head, features);
  check_shape(labels.size() == features.rows(),
              "labels do not match the feature rows");
  ad::Tape tape;
  const ad::Var a = tape.variable(head.adapter);
  const ad::Var b = tape.variable(head.bias);
  const ad::Var w = tape.variable(head.class_matrix);
  const ad::Var loss = ad::cross_entropy_from_logits(
      head_logits(tape, features, a, b, w), labels, head.seen_mask());
  tape.backward(loss);
  return {loss.value()(0, 0), tape.grad(a), tape.grad(b), tape.grad(w)};
}

FinetuneResult finetune_adapter(ClassifierHead head,
                                const FeatureDataset& dataset,
                                const FinetunePlan& plan) {
  plan.validate();
  dataset.validate();
  if (dataset.dim != head.feature_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "dataset features have width " + std::to_string(dataset.dim) +
                    ", the adapter expects " +
                    std::to_string(head.feature_dim()));
  }
  const auto train_items = dataset.in_split(Split::kTrain);
  if (train_items.empty()) {
    throw Error(ErrorCode::kEmptyTrainSplit, "train split is empty");
  }
  const Matrix train_x = stack_features(train_items, dataset.dim);
  const auto train_y = label_indices(head, train_items);
  for (size_t i = 0; i < train_y.size(); ++i) {
    if (train_y[i] >= head.num_seen) {
      throw Error(ErrorCode::kUnseenLabelInTrain,
                  "train sample '" + train_items[i]->id +
                      "' has unseen label '" + train_items[i]->label.str() +
                      "'");
    }
  }
  const auto val_items = dataset.in_split(Split::kVal);
  const Matrix val_x = stack_features(val_items, dataset.dim);
  const auto val_y = label_indices(head, val_items);

  const auto record = [&](int epoch) {
    FinetuneEpoch e{epoch, full_loss(head, train_x, train_y), std::nullopt};
    if (!std::isfinite(e.train_loss)) {
      throw Error(ErrorCode::kDivergedLoss,
                  "fine-tune loss became non-finite at epoch " +
                      std::to_string(epoch));
    }
    if (!val_items.empty()) {
      e.val_seen_accuracy = seen_accuracy(head, val_x, val_y);
    }
    return e;
  };

  FinetuneResult result;
  result.log.push_back(record(0));
  numerics::Optimizer optimizer(plan.optimizer);
  const size_t n = train_items.size();
  const size_t batch = plan.batch_size == 0 ? n : std::min(plan.batch_size, n);
  for (int epoch = 1; epoch <= plan.epochs; ++epoch) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    numerics::Rng rng(numerics::Rng::derive_seed(plan.seed,
                                                 static_cast<uint64_t>(epoch)));
    rng.shuffle(std::span<size_t>(order));
    for (size_t begin = 0; begin < n; begin += batch) {
      const size_t end = std::min(n, begin + batch);
      Matrix x(end - begin, dataset.dim);
      std::vector<size_t> y;
      for (size_t k = begin; k < end; ++k) {
        const auto src = train_x.row(order[k]);
        std::copy(src.begin(), src.end(), x.row(k - begin).begin());
        y.push_back(train_y[order[k]]);
      }
      ad::Tape tape;
      const ad::Var a = tape.variable(head.adapter);
      const ad::Var b = tape.variable(head.bias);
      const ad::Var loss = ad::cross_entropy_from_logits(
          head_logits(tape, x, a, b, tape.constant(head.class_matrix)), y,
          head.seen_mask());
      tape.backward(loss);
      std::vector<Matrix> params{std::move(head.adapter), std::move(head.bias)};
      const std::vector<Matrix> grads{tape.grad(a), tape.grad(b)};
      optimizer.step(params, grads);
      if (!params[0].all_finite() || !params[1].all_finite()) {
        throw Error(ErrorCode::kDivergedLoss,
                    "adapter became non-finite at epoch " +
                        std::to_string(epoch));
      }
      head.adapter = std::move(params[0]);
      head.bias = std::move(params[1]);
    }
    result.log.push_back(record(epoch));
  }
  result.head = std::move(head);
  return result;
}

void write_finetune_log(std::ostream& out,
                        const std::vector<FinetuneEpoch>& log) {
  out << "epoch,train_loss,val_seen_accuracy\n";
  for (const auto& e : log) {
    out << e.epoch << ',' << format_double(e.train_loss) << ',';
    if (e.val_seen_accuracy) out << format_double(*e.val_seen_accuracy);
    out << '\n';
  }
}

Matrix predict_scores(const ClassifierHead& head, const Matrix& features) {
  check_features(head, features);
  Matrix z = numerics::matmul(features, head.adapter);
  for (size_t i = 0; i < z.rows(); ++i) {
    for (size_t j = 0; j < z.cols(); ++j) z(i, j) += head.bias(0, j);
  }
  return numerics::matmul_transposed_b(z, head.class_matrix);
}

eval::ScoreSet score_split(const ClassifierHead& head,
                           const FeatureDataset& dataset, Split split) {
  const auto items = dataset.in_split(split);
  eval::ScoreSet s;
  for (const auto& c : head.classes) s.classes.push_back(c.str());
  s.seen = head.seen_mask();
  for (const auto* item : items) s.ids.push_back(item->id);
  s.labels = label_indices(head, items);
  s.scores = predict_scores(head, stack_features(items, dataset.dim));
  return s;
}

void write_head(std::ostream& out, const ClassifierHead& head) {
  out << "kgzsl-head v1\n";
  out << "classes " << head.classes.size() << " seen " << head.num_seen
      << '\n';
  for (const auto& c : head.classes) out << c.str() << '\n';
  out << "class_matrix\n";
  numerics::write_matrix(out, head.class_matrix);
  out << "adapter\n";
  numerics::write_matrix(out, head.adapter);
  out << "bias\n";
  numerics::write_matrix(out, head.bias);
}

ClassifierHead read_head(std::istream& in) {
  const auto fail = [](const std::string& what) -> Error {
    return Error(ErrorCode::kMalformedLine, "head file: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || trim(line) != "kgzsl-head v1") {
    throw fail("missing 'kgzsl-head v1' header");
  }
  if (!std::getline(in, line)) throw fail("missing class count");
  const auto f = split_whitespace(line);
  const auto n = f.size() == 4 ? parse_int(f[1]) : std::nullopt;
  const auto s = f.size() == 4 ? parse_int(f[3]) : std::nullopt;
  if (!n || !s || f[0] != "classes" || f[2] != "seen" || *n < 0 || *s < 0 ||
      *s > *n) {
    throw fail("bad class count line");
  }
  ClassifierHead head;
  head.num_seen = static_cast<size_t>(*s);
  for (int64_t k = 0; k < *n; ++k) {
    if (!std::getline(in, line)) throw fail("truncated class list");
    head.classes.push_back(kg::ConceptId(std::string(trim(line))));
  }
  const auto section = [&](std::string_view name) {
    if (!std::getline(in, line) || trim(line) != name) {
      throw fail("expected section '" + std::string(name) + "'");
    }
    return numerics::read_matrix(in);
  };
  head.class_matrix = section("class_matrix");
  head.adapter = section("adapter");
  head.bias = section("bias");
  if (head.class_matrix.rows() != head.classes.size() ||
      head.adapter.cols() != head.class_matrix.cols() ||
      head.bias.rows() != 1 || head.bias.cols() != head.class_matrix.cols()) {
    throw Error(ErrorCode::kDimMismatch, "head file matrices disagree");
  }
  return head;
}

}  // namespace kgzsl::zsl
