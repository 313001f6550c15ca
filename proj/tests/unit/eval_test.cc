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
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "kgzsl/common/error.h"
#include "kgzsl/eval/metrics.h"
#include "kgzsl/eval/scores.h"
#include "kgzsl/numerics/random.h"
#include "testing/eval_oracle.h"

namespace kgzsl::eval {
namespace {

using numerics::Matrix;
using numerics::Rng;

constexpr double kInf = std::numeric_limits<double>::infinity();

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

// Classes a, b seen; c unseen.
ScoreSet hand_fixture() {
  ScoreSet s;
  s.classes = {"a", "b", "c"};
  s.seen = {true, true, false};
  s.ids = {"s1", "s2", "s3", "s4"};
  s.labels = {0, 1, 2, 2};
  s.scores = Matrix::from_rows({{1.0, 0.2, 0.6},
                                {0.1, 0.9, 0.3},
                                {0.5, 0.4, 0.2},
                                {0.9, 0.1, 0.3}});
  return s;
}

std::set<std::pair<double, double>> pair_set(const GzslCurve& c) {
  std::set<std::pair<double, double>> out;
  for (const auto& p : c.points) out.emplace(p.seen_acc, p.unseen_acc);
  return out;
}

GzslCurve curve_of(std::vector<std::pair<double, double>> su) {
  GzslCurve c;
  double b = 0.0;
  for (auto [s, u] : su) c.points.push_back({b++, s, u});
  return c;
}

TEST(GroupAccuracy, AllCorrectIsOne) {
  ScoreSet s = hand_fixture();
  s.scores = Matrix::from_rows(
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
  EXPECT_EQ(seen_accuracy(s, 0.0), 1.0);
  EXPECT_EQ(unseen_accuracy(s, 0.0), 1.0);
}

TEST(GroupAccuracy, HugeBiasSendsEverythingUnseen) {
  const ScoreSet s = hand_fixture();
  EXPECT_EQ(seen_accuracy(s, 1e9), 0.0);
  EXPECT_EQ(unseen_accuracy(s, 1e9), 1.0);
}

TEST(GroupAccuracy, HandFixtureAtHalf) {
  // s1: c gets 1.1 > 1.0, wrong. s2: 0.8 < 0.9, b right.
  // s3: 0.7 > 0.5, c right. s4: 0.8 < 0.9, a chosen, wrong.
  const ScoreSet s = hand_fixture();
  EXPECT_EQ(predict(s, 0, 0.5), 2u);
  EXPECT_EQ(predict(s, 1, 0.5), 1u);
  EXPECT_EQ(predict(s, 2, 0.5), 2u);
  EXPECT_EQ(predict(s, 3, 0.5), 0u);
  EXPECT_EQ(seen_accuracy(s, 0.5), 0.5);
  EXPECT_EQ(unseen_accuracy(s, 0.5), 0.5);
}

TEST(GroupAccuracy, TieGoesToLowerIndex) {
  ScoreSet s = hand_fixture();
  s.scores = Matrix::from_rows(
      {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}});
  for (size_t i = 0; i < 4; ++i) EXPECT_EQ(predict(s, i, 0.0), 0u);
  EXPECT_EQ(seen_accuracy(s, 0.0), 0.5);
}

TEST(GroupAccuracy, PerClassAveraging) {
  // Class a: 1 of 1 right, class b: 0 of 3 right.
  ScoreSet s;
  s.classes = {"a", "b", "c"};
  s.seen = {true, true, false};
  s.ids = {"1", "2", "3", "4", "5"};
  s.labels = {0, 1, 1, 1, 2};
  s.scores = Matrix::from_rows(
      {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 0, 1}});
  EXPECT_DOUBLE_EQ(seen_accuracy(s, 0.0), 0.25);
  EXPECT_DOUBLE_EQ(seen_accuracy(s, 0.0, Averaging::kPerClass), 0.5);
}

TEST(GroupAccuracy, Errors) {
  ScoreSet s = hand_fixture();
  s.labels = {0, 1, 0, 1};
  EXPECT_EQ(code_of([&] { unseen_accuracy(s, 0.0); }), ErrorCode::kEmptyGroup);
  s.seen = {true, true, true};
  EXPECT_EQ(code_of([&] { seen_accuracy(s, 0.0); }),
            ErrorCode::kDegeneratePartition);
  EXPECT_EQ(code_of([&] { critical_biases(s); }),
            ErrorCode::kDegeneratePartition);
}

TEST(CriticalBiases, SingleSample) {
  ScoreSet s;
  s.classes = {"a", "b"};
  s.seen = {true, false};
  s.ids = {"x"};
  s.labels = {0};
  s.scores = Matrix::from_rows({{2.0, 1.0}});
  const auto cb = critical_biases(s);
  ASSERT_EQ(cb.critical, std::vector<double>{1.0});
  ASSERT_EQ(cb.points.size(), 2u);
  EXPECT_EQ(cb.points.front(), -kInf);
  EXPECT_EQ(cb.points.back(), kInf);
  EXPECT_EQ(predict(s, 0, 0.99), 0u);
  EXPECT_EQ(predict(s, 0, 1.01), 1u);
}

TEST(CriticalBiases, IdenticalScores) {
  ScoreSet s = hand_fixture();
  s.scores = Matrix(4, 3, 0.7);
  EXPECT_EQ(critical_biases(s).critical, std::vector<double>{0.0});
}

TEST(CriticalBiases, CountingBound) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const size_t n = 2 + rng.uniform_index(20);
    const auto s = testing::quantized_scores(n, 3, 2, rng);
    const auto cb = critical_biases(s);
    EXPECT_LE(cb.critical.size(), n);
    EXPECT_LE(cb.points.size(), 2 * n + 1);
    EXPECT_TRUE(std::is_sorted(cb.points.begin(), cb.points.end()));
    // One evaluation point strictly inside every regime.
    ASSERT_EQ(cb.points.size(), cb.critical.size() + 1);
    for (size_t k = 0; k < cb.critical.size(); ++k) {
      EXPECT_LT(cb.points[k], cb.critical[k]);
      EXPECT_GT(cb.points[k + 1], cb.critical[k]);
    }
  }
}

TEST(BiasSweep, ZeroBiasMatchesRawArgmax) {
  const ScoreSet s = hand_fixture();
  const auto cb = critical_biases(s);
  const auto curve = bias_sweep(s);
  ASSERT_EQ(std::count(cb.critical.begin(), cb.critical.end(), 0.0), 0);
  const size_t regime = static_cast<size_t>(
      std::lower_bound(cb.critical.begin(), cb.critical.end(), 0.0) -
      cb.critical.begin());
  EXPECT_EQ(curve.points[regime].seen_acc, seen_accuracy(s, 0.0));
  EXPECT_EQ(curve.points[regime].unseen_acc, unseen_accuracy(s, 0.0));
}

TEST(BiasSweep, SaturatedEndpoints) {
  const ScoreSet s = hand_fixture();
  const auto curve = bias_sweep(s);
  EXPECT_EQ(curve.points.front().unseen_acc, 0.0);
  EXPECT_EQ(curve.points.front().seen_acc, curve.seen_max());
  EXPECT_EQ(curve.points.back().seen_acc, 0.0);
}

TEST(BiasSweep, SixSampleFixtureMatchesDenseGrid) {
  ScoreSet s;
  s.classes = {"a", "b", "c", "d"};
  s.seen = {true, true, false, false};
  s.ids = {"1", "2", "3", "4", "5", "6"};
  s.labels = {0, 1, 2, 3, 0, 2};
  // Eighths keep every score difference exact.
  s.scores = Matrix::from_rows({{7, 1, 2, 2},
                                {2, 5, 4, -3},
                                {3, 2, 1, 0},
                                {6, -2, 1, 5},
                                {2, 6, -4, 2},
                                {4, 4, 3, 3}});
  for (double& v : s.scores.values()) v /= 8.0;
  EXPECT_EQ(pair_set(bias_sweep(s)),
            testing::dense_grid_pairs(s, -3.0, 3.0, 10000));
}

TEST(BiasSweep, RandomInstancesMatchDenseGrid) {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const auto s =
        testing::quantized_scores(3 + rng.uniform_index(8), 2, 2, rng);
    const auto grid = testing::dense_grid_pairs(s, -3.0, 3.0, 10000);
    const auto curve = bias_sweep(s);
    EXPECT_EQ(pair_set(curve), grid) << "instance " << t;
    EXPECT_NEAR(best_hm(curve), testing::pairs_best_hm(grid), 1e-9);
    EXPECT_NEAR(auc(curve), testing::pairs_auc(grid), 1e-9);
  }
}

TEST(BiasSweep, MonotoneAndBounded) {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const auto s = testing::quantized_scores(20, 4, 3, rng);
    const auto curve = bias_sweep(s);
    for (size_t k = 1; k < curve.points.size(); ++k) {
      EXPECT_LT(curve.points[k - 1].bias, curve.points[k].bias);
      EXPECT_LE(curve.points[k].seen_acc, curve.points[k - 1].seen_acc);
      EXPECT_GE(curve.points[k].unseen_acc, curve.points[k - 1].unseen_acc);
    }
    const auto m = summarize(curve);
    for (double v : {m.best_seen, m.best_unseen, m.best_hm, m.auc}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(m.best_hm, harmonic_mean(m.best_seen, m.best_unseen) + 1e-12);
    EXPECT_LE(m.auc, m.best_seen * m.best_unseen + 1e-12);
  }
}

TEST(BiasSweep, ScaleInvariance) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto s = testing::quantized_scores(15, 3, 3, rng);
    // Powers of two keep every score difference exact.
    for (double lambda : {0.25, 4.0, 1024.0}) {
      ScoreSet scaled = s;
      for (double& v : scaled.scores.values()) v *= lambda;
      const auto a = bias_sweep(s);
      const auto b = bias_sweep(scaled);
      EXPECT_EQ(pair_set(a), pair_set(b));
      EXPECT_EQ(best_hm(a), best_hm(b));
      EXPECT_EQ(auc(a), auc(b));
    }
  }
}

TEST(BestHm, Examples) {
  EXPECT_DOUBLE_EQ(best_hm(curve_of({{0.4, 0.4}})), 0.4);
  EXPECT_NEAR(best_hm(curve_of({{0.8, 0.2}, {0.6, 0.5}, {0.3, 0.6}})),
              0.6 / 1.1, 1e-12);
  EXPECT_NEAR(harmonic_mean(0.8, 0.2), 0.32, 1e-12);
  EXPECT_NEAR(harmonic_mean(0.3, 0.6), 0.4, 1e-12);
  EXPECT_EQ(best_hm(curve_of({{0.7, 0.0}})), 0.0);
  EXPECT_EQ(harmonic_mean(0.0, 0.0), 0.0);
}

TEST(Auc, Examples) {
  EXPECT_NEAR(auc(curve_of({{0.9, 0.0}, {0.6, 0.5}, {0.0, 0.7}})), 0.435,
              1e-12);
  EXPECT_EQ(auc(curve_of({{0.9, 0.0}, {0.3, 0.0}})), 0.0);
  EXPECT_DOUBLE_EQ(auc(curve_of({{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}})), 1.0);
}

TEST(Auc, EndpointsAddedForSingleRegime) {
  // Only the interior point: the curve is closed by (0, 0.6) and (0.5, 0).
  EXPECT_NEAR(auc(curve_of({{0.6, 0.5}})), 0.5 * 0.6, 1e-12);
}

TEST(Report, PercentRendering) {
  EXPECT_EQ(format_percent(0.4556), "45.6");
  EXPECT_EQ(format_percent(0.865), "86.5");
  EXPECT_EQ(format_percent(0.0), "0.0");
  EXPECT_EQ(format_percent(1.0), "100.0");
}

TEST(Report, ReferenceRowRendering) {
  std::ostringstream csv;
  write_report_csv(csv, {{"reference", {0.865, 0.642, 0.456, 0.354}}});
  EXPECT_EQ(csv.str(), "Model,Seen,Unseen,HM,AUC\nreference,86.5,64.2,45.6,35.4\n");
  std::ostringstream md;
  write_report_markdown(md, {{"reference", {0.865, 0.642, 0.456, 0.354}}});
  EXPECT_NE(md.str().find("| reference | 86.5 | 64.2 | 45.6 | 35.4 |"),
            std::string::npos);
}

TEST(Report, PublishedRowSatisfiesBounds) {
  EXPECT_GE(harmonic_mean(0.865, 0.642), 0.456);
  EXPECT_NEAR(harmonic_mean(0.865, 0.642), 0.737, 5e-4);
  EXPECT_GE(0.865 * 0.642, 0.354);
}

TEST(Report, EmptyIsHeaderOnly) {
  std::ostringstream csv;
  write_report_csv(csv, {});
  EXPECT_EQ(csv.str(), "Model,Seen,Unseen,HM,AUC\n");
  std::ostringstream md;
  write_report_markdown(md, {});
  EXPECT_EQ(md.str(), "| Model | Seen | Unseen | HM | AUC |\n"
                      "|---|---:|---:|---:|---:|\n");
}

TEST(Report, MetricsRoundTripIsIdempotent) {
  const std::vector<NamedRow> rows{{"x", {0.5, 0.25, 1.0 / 3.0, 0.1}},
                                   {"y", {0.9, 0.0, 0.0, 0.0}}};
  std::ostringstream a;
  write_metrics_csv(a, rows);
  std::istringstream in(a.str());
  const auto back = read_metrics_csv(in);
  std::ostringstream b;
  write_metrics_csv(b, back);
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream r1, r2;
  write_report_csv(r1, rows);
  write_report_csv(r2, back);
  EXPECT_EQ(r1.str(), r2.str());
}

TEST(Scores, RoundTrip) {
  const ScoreSet s = hand_fixture();
  std::ostringstream scores, manifest;
  write_scores(scores, s);
  write_class_manifest(manifest, s);
  std::istringstream si(scores.str()), mi(manifest.str());
  const ScoreSet back = read_scores(si, mi);
  EXPECT_EQ(back.classes, s.classes);
  EXPECT_EQ(back.seen, s.seen);
  EXPECT_EQ(back.ids, s.ids);
  EXPECT_EQ(back.labels, s.labels);
  EXPECT_EQ(back.scores, s.scores);
}

TEST(Scores, Errors) {
  std::istringstream m1("a\tseen\nb\tunseen\n");
  std::istringstream s1("x\tz\t1 2\n");
  EXPECT_EQ(code_of([&] { read_scores(s1, m1); }), ErrorCode::kInvalidDataset);
  std::istringstream m2("a\tseen\nb\tunseen\n");
  std::istringstream s2("x\ta\t1\n");
  EXPECT_EQ(code_of([&] { read_scores(s2, m2); }), ErrorCode::kInvalidDataset);
  std::istringstream m3("a\tmaybe\n");
  std::istringstream s3("");
  EXPECT_EQ(code_of([&] { read_scores(s3, m3); }), ErrorCode::kInvalidDataset);
}

TEST(Curve, TsvLayout) {
  std::ostringstream out;
  write_curve(out, bias_sweep(hand_fixture()));
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("bias\tseen_acc\tunseen_acc\n-inf\t", 0), 0u);
  EXPECT_NE(text.find("\ninf\t0\t1\n"), std::string::npos);
}

}  // namespace
}  // namespace kgzsl::eval
