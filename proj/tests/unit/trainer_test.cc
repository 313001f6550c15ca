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

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"
#include "kgzsl/gnn/model.h"
#include "kgzsl/kg/builder.h"
#include "kgzsl/kg/graph.h"
#include "kgzsl/numerics/random.h"
#include "kgzsl/trainer/baselines.h"
#include "kgzsl/trainer/embedding_table.h"
#include "kgzsl/trainer/train.h"

namespace kgzsl::trainer {
namespace {

using kg::ConceptId;
using numerics::Matrix;
using numerics::Rng;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kUsage;
}

std::vector<ConceptId> names(size_t n, const std::string& prefix = "a") {
  std::vector<ConceptId> out;
  for (size_t i = 0; i < n; ++i) out.emplace_back(prefix + std::to_string(i));
  return out;
}

// --- split -------------------------------------------------------------

TEST(SplitAnchors, Examples) {
  const auto big = split_anchors(names(1000), 0.05, 3);
  EXPECT_EQ(big.train.size(), 950u);
  EXPECT_EQ(big.val.size(), 50u);
  const auto tiny = split_anchors(names(2), 0.5, 3);
  EXPECT_EQ(tiny.train.size(), 1u);
  EXPECT_EQ(tiny.val.size(), 1u);
  const auto again = split_anchors(names(1000), 0.05, 3);
  EXPECT_EQ(again.train, big.train);
  EXPECT_EQ(again.val, big.val);
}

TEST(SplitAnchors, DisjointExhaustiveAndOrderInsensitive) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 2 + rng.uniform_index(60);
    const double f = rng.uniform(0.01, 0.99);
    auto all = names(n);
    const auto s = split_anchors(all, f, trial);
    std::set<ConceptId> seen(s.train.begin(), s.train.end());
    for (const auto& v : s.val) EXPECT_TRUE(seen.insert(v).second);
    EXPECT_EQ(seen.size(), n);
    EXPECT_GE(s.val.size(), 1u);
    EXPECT_GE(s.train.size(), 1u);
    rng.shuffle(std::span<ConceptId>(all));
    EXPECT_EQ(split_anchors(all, f, trial).val, s.val);
  }
}

TEST(SplitAnchors, Errors) {
  EXPECT_EQ(code_of([] { split_anchors(names(1), 0.5, 0); }),
            ErrorCode::kTooFewAnchors);
  EXPECT_EQ(code_of([] { split_anchors(names(4), 1.0, 0); }),
            ErrorCode::kConfig);
}

TEST(SelectCheckpoint, ArgminEarliestOnTies) {
  const std::vector<double> log{1.0, 0.5, 0.7, 0.6};
  EXPECT_EQ(select_checkpoint(log), 1u);  // second logged epoch
  const std::vector<double> tie{0.3, 0.2, 0.2};
  EXPECT_EQ(select_checkpoint(tie), 1u);
}

// --- targets and tables -----------------------------------------------

TEST(Targets, NormalizedOnLoadZeroRejected) {
  std::istringstream in("b 3 4\na 0 2\n");
  const auto t = read_targets(in);
  ASSERT_EQ(t.names, (std::vector<ConceptId>{ConceptId("a"), ConceptId("b")}));
  EXPECT_DOUBLE_EQ(t.vectors(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(t.vectors(1, 0), 0.6);
  std::istringstream zero("a 0 0\n");
  EXPECT_EQ(code_of([&] { read_targets(zero); }), ErrorCode::kInvalidDataset);
}

TEST(EmbeddingTable, FileRoundTripWithProvenance) {
  const auto dir = std::filesystem::temp_directory_path() / "kgzsl_table_test";
  std::filesystem::remove_all(dir);
  EmbeddingTable t({ConceptId("z"), ConceptId("m")},
                   Matrix::from_rows({{0.1, 0.2}, {1.0 / 3.0, -2.5}}));
  t.provenance()["seed"] = 7;
  write_embedding_table(dir / "emb.tsv", t);
  const auto back = read_embedding_table(dir / "emb.tsv");
  EXPECT_EQ(back.names(), t.names());
  EXPECT_EQ(back.vectors(), t.vectors());
  EXPECT_EQ(back.provenance(), t.provenance());
  EXPECT_EQ(back.names().front().str(), "m");
  EXPECT_EQ(code_of([&] { back.row(ConceptId("q")); }),
            ErrorCode::kMissingClassEmbedding);
  std::filesystem::remove_all(dir);
}

// --- training ---------------------------------------------------------

// Six nodes: seen s, unseen u, anchors p, q, r and a hub h.
kg::KnowledgeGraph six_node_graph() {
  const auto rel = kg::RelationType{"R", kg::RelationCategory::kCommonSense};
  std::vector<kg::SourceEdge> edges;
  auto add = [&](const char* a, const char* b) {
    edges.push_back({ConceptId(a), ConceptId(b), rel, 1.0});
  };
  add("s", "h");
  add("u", "h");
  add("p", "s");
  add("q", "h");
  add("r", "u");
  add("p", "q");
  return kg::expand(kg::EdgeIndex(edges),
                    {{"s", kg::SeedLabel::kSeen}, {"u", kg::SeedLabel::kUnseen}},
                    {2, kg::IncludeAll{}})
      .graph;
}

gnn::GnnModel small_model(gnn::Architecture arch, uint64_t seed) {
  gnn::GnnConfig cfg;
  cfg.architecture = arch;
  cfg.layer_dims = {4, 6, 3};
  Rng rng(seed);
  return gnn::GnnModel::init(cfg, 1, rng);
}

// Targets share a dominant direction, so fitting the train anchors
// transfers to the held-out one.
TargetWeights anchor_targets(uint64_t seed) {
  Rng rng(seed);
  gnn::ConceptVectors v;
  for (const char* a : {"p", "q", "r"}) {
    v[ConceptId(a)] = {-1.0 + 0.2 * rng.normal(), -1.0 + 0.2 * rng.normal(),
                       -1.0 + 0.2 * rng.normal()};
  }
  return make_targets(v);
}

Matrix features(uint64_t seed) {
  Rng rng(seed);
  return numerics::glorot_init(6, 4, rng);
}

TrainPlan plan(int epochs) {
  TrainPlan p;
  p.epochs = epochs;
  p.val_fraction = 0.34;
  p.seed = 5;
  p.optimizer.lr = 0.01;
  return p;
}

TEST(Train, ValidationLossDecreases) {
  const auto g = six_node_graph();
  for (auto arch : {gnn::Architecture::kGcn, gnn::Architecture::kRgcn,
                    gnn::Architecture::kLstm, gnn::Architecture::kTrGcn}) {
    const auto r = train_embeddings(g, features(1), small_model(arch, 2),
                                    anchor_targets(3), plan(200));
    ASSERT_EQ(r.log.epochs.size(), 201u);
    EXPECT_LT(r.log.best_val_loss, r.log.epochs.front().val_loss)
        << gnn::architecture_name(arch);
    EXPECT_LT(r.log.epochs.back().train_loss, r.log.epochs.front().train_loss);
    double min_val = r.log.epochs.front().val_loss;
    for (const auto& e : r.log.epochs) min_val = std::min(min_val, e.val_loss);
    EXPECT_EQ(r.log.best_val_loss, min_val);
    EXPECT_EQ(r.log.epochs[static_cast<size_t>(r.log.best_epoch)].val_loss,
              min_val);
  }
}

TEST(Train, ZeroLossFixedPoint) {
  const auto g = six_node_graph();
  const auto model = small_model(gnn::Architecture::kGcn, 4);
  const auto x = features(5);
  const auto initial = model.infer(
      gnn::PreparedGraph::build(gnn::GraphView::from_graph(g), model.config()),
      x);
  gnn::ConceptVectors v;
  for (const char* a : {"p", "q", "r"}) {
    const auto row = initial.row(*g.find(ConceptId(a)));
    v[ConceptId(a)] = {row.begin(), row.end()};
  }
  const auto r = train_embeddings(g, x, model, make_targets(v), plan(20));
  EXPECT_NEAR(r.log.epochs.front().train_loss, 0.0, 1e-24);
  EXPECT_EQ(r.log.best_epoch, 0);
  EXPECT_EQ(r.node_embeddings, initial);
}

TEST(Train, TableCoversExactlyTheSeedClasses) {
  const auto g = six_node_graph();
  const auto r = train_embeddings(g, features(1),
                                  small_model(gnn::Architecture::kTrGcn, 2),
                                  anchor_targets(3), plan(5));
  EXPECT_EQ(r.table.names(),
            (std::vector<ConceptId>{ConceptId("s"), ConceptId("u")}));
  for (size_t i = 0; i < r.table.size(); ++i) {
    EXPECT_NEAR(numerics::squared_norm(r.table.vectors().row(i)), 1.0, 1e-12);
  }
  EXPECT_EQ(r.table.provenance()["kind"], "trained");
  EXPECT_EQ(r.table.provenance()["best_epoch"], r.log.best_epoch);
}

TEST(Train, BitIdenticalAcrossRuns) {
  const auto g = six_node_graph();
  const auto a = train_embeddings(g, features(1),
                                  small_model(gnn::Architecture::kLstm, 2),
                                  anchor_targets(3), plan(30));
  const auto b = train_embeddings(g, features(1),
                                  small_model(gnn::Architecture::kLstm, 2),
                                  anchor_targets(3), plan(30));
  EXPECT_EQ(a.table.vectors(), b.table.vectors());
  std::ostringstream la, lb;
  write_train_log(la, a.log);
  write_train_log(lb, b.log);
  EXPECT_EQ(la.str(), lb.str());
}

TEST(Train, ValidationAnchorsDoNotLeakIntoGradients) {
  const auto g = six_node_graph();
  auto targets = anchor_targets(3);
  const auto p = plan(40);
  const auto a = train_embeddings(g, features(1),
                                  small_model(gnn::Architecture::kGcn, 2),
                                  targets, p);
  const auto split = split_anchors(targets.names, p.val_fraction, p.seed);
  ASSERT_EQ(split.val.size(), 1u);
  // Rewrite the validation target; the optimizer trajectory must not move.
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets.names[i] == split.val[0]) {
      for (double& x : targets.vectors.row(i)) x = -x;
    }
  }
  const auto b = train_embeddings(g, features(1),
                                  small_model(gnn::Architecture::kGcn, 2),
                                  targets, p);
  ASSERT_EQ(a.log.epochs.size(), b.log.epochs.size());
  for (size_t e = 0; e < a.log.epochs.size(); ++e) {
    EXPECT_EQ(a.log.epochs[e].train_loss, b.log.epochs[e].train_loss);
  }
  EXPECT_NE(a.log.epochs.back().val_loss, b.log.epochs.back().val_loss);
}

TEST(Train, Errors) {
  const auto g = six_node_graph();
  gnn::ConceptVectors v{{ConceptId("p"), {1, 0, 0}},
                        {ConceptId("q"), {0, 1, 0}},
                        {ConceptId("elsewhere"), {0, 0, 1}}};
  const auto t = make_targets(v);
  const auto model = small_model(gnn::Architecture::kGcn, 1);
  EXPECT_EQ(code_of([&] { train_embeddings(g, features(1), model, t, plan(1)); }),
            ErrorCode::kAnchorNotInGraph);
  auto lenient = plan(1);
  lenient.allow_missing_anchors = true;
  const auto r = train_embeddings(g, features(1), model, t, lenient);
  EXPECT_EQ(r.log.dropped_anchors, std::vector<std::string>{"elsewhere"});

  gnn::ConceptVectors wide{{ConceptId("p"), {1, 0}}, {ConceptId("q"), {0, 1}}};
  EXPECT_EQ(code_of([&] {
              train_embeddings(g, features(1), model, make_targets(wide),
                               plan(1));
            }),
            ErrorCode::kDimMismatch);

  auto blowup = plan(50);
  blowup.optimizer.kind = numerics::OptimizerKind::kSgdMomentum;
  blowup.optimizer.lr = 1e300;
  EXPECT_EQ(code_of([&] {
              train_embeddings(g, features(1), model, anchor_targets(3), blowup);
            }),
            ErrorCode::kDivergedLoss);
}

// --- baselines --------------------------------------------------------

TEST(Baselines, RandomIsSeededAndNearOrthogonal) {
  const auto classes = names(10, "c");
  const auto a = random_table(classes, 64, 11);
  const auto b = random_table(classes, 64, 11);
  EXPECT_EQ(a.vectors(), b.vectors());
  EXPECT_NE(random_table(classes, 64, 12).vectors(), a.vectors());
  double total = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(numerics::squared_norm(a.vectors().row(i)), 1.0, 1e-12);
    for (size_t j = i + 1; j < 10; ++j) {
      total += numerics::dot(a.vectors().row(i), a.vectors().row(j));
      ++pairs;
    }
  }
  EXPECT_LT(std::abs(total / static_cast<double>(pairs)), 0.2);
}

TEST(Baselines, UnrelatedMapping) {
  const auto g = six_node_graph();
  const auto r = train_embeddings(g, features(1),
                                  small_model(gnn::Architecture::kGcn, 2),
                                  anchor_targets(3), plan(10));
  const auto nodes = node_table(g, r.node_embeddings);
  const std::vector<ConceptId> classes{ConceptId("s"), ConceptId("u")};
  const auto same = unrelated_table(nodes, classes, {});
  EXPECT_EQ(same.vectors(), r.table.vectors());
  const auto identity = unrelated_table(
      nodes, classes,
      {{ConceptId("s"), ConceptId("s")}, {ConceptId("u"), ConceptId("u")}});
  EXPECT_EQ(identity.vectors(), r.table.vectors());

  const auto mapping = choose_unrelated_mapping(g, 9);
  ASSERT_EQ(mapping.size(), 2u);
  std::set<ConceptId> targets;
  for (const auto& [cls, target] : mapping) {
    const auto idx = g.find(target);
    ASSERT_TRUE(idx.has_value());
    EXPECT_EQ(g.nodes()[*idx].seed, kg::SeedLabel::kNone);
    targets.insert(target);
  }
  EXPECT_EQ(targets.size(), 2u);
  EXPECT_EQ(choose_unrelated_mapping(g, 9), mapping);
  const auto un = unrelated_table(nodes, classes, mapping);
  EXPECT_EQ(un.row(ConceptId("s")), nodes.row(mapping.at(ConceptId("s"))));

  EXPECT_EQ(code_of([&] {
              unrelated_table(nodes, classes,
                              {{ConceptId("s"), ConceptId("nowhere")}});
            }),
            ErrorCode::kMissingMappingTarget);
}

TEST(Baselines, RemapThroughLookupMatchesUnrelatedTable) {
  const auto g = six_node_graph();
  const auto r = train_embeddings(g, features(1),
                                  small_model(gnn::Architecture::kGcn, 2),
                                  anchor_targets(3), plan(10));
  const std::map<ConceptId, ConceptId> swap{{ConceptId("s"), ConceptId("u")},
                                            {ConceptId("u"), ConceptId("s")}};
  const auto remapped = kg::remap_state_nodes(g, swap);
  const auto table = seed_class_table(remapped, r.node_embeddings);
  EXPECT_EQ(table.row(ConceptId("s")), r.table.row(ConceptId("u")));
  EXPECT_EQ(table.row(ConceptId("u")), r.table.row(ConceptId("s")));
}

}  // namespace
}  // namespace kgzsl::trainer
