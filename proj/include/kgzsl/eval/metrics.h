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

#ifndef KGZSL_EVAL_METRICS_H_
#define KGZSL_EVAL_METRICS_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "kgzsl/eval/scores.h"

namespace kgzsl::eval {

enum class Averaging { kPerSample, kPerClass };

// Class predicted for sample `row` once `bias` is added to every unseen
// score. Equal scores go to the lower class index.
size_t predict(const ScoreSet& s, size_t row, double bias);

// Top-1 accuracy over the samples whose label is flagged in `group`.
// Throws kEmptyGroup when no sample qualifies.
double group_accuracy(const ScoreSet& s, const std::vector<bool>& group,
                      double bias, Averaging averaging = Averaging::kPerSample);
double seen_accuracy(const ScoreSet& s, double bias,
                     Averaging averaging = Averaging::kPerSample);
double unseen_accuracy(const ScoreSet& s, double bias,
                       Averaging averaging = Averaging::kPerSample);

struct CriticalBiases {
  std::vector<double> critical;  // sorted unique max_seen - max_unseen
  std::vector<double> points;    // -inf, midpoints, +inf
};

// kDegeneratePartition without at least one seen and one unseen class.
CriticalBiases critical_biases(const ScoreSet& s);

struct CurvePoint {
  double bias = 0.0;
  double seen_acc = 0.0;
  double unseen_acc = 0.0;
};

struct GzslCurve {
  std::vector<CurvePoint> points;  // increasing bias

  double seen_max() const;
  double unseen_max() const;
};

GzslCurve bias_sweep(const ScoreSet& s,
                     Averaging averaging = Averaging::kPerSample);

double harmonic_mean(double a, double b);  // 0 when a + b == 0
double best_hm(const GzslCurve& curve);
// Trapezoids of seen accuracy over unseen accuracy, closed by the
// (0, seen_max) and (unseen_max, 0) endpoints.
double auc(const GzslCurve& curve);

struct MetricsRow {
  double best_seen = 0.0;
  double best_unseen = 0.0;
  double best_hm = 0.0;
  double auc = 0.0;
};

MetricsRow summarize(const GzslCurve& curve);

struct NamedRow {
  std::string name;
  MetricsRow row;
};

// Percent with one decimal: 0.4556 -> "45.6".
std::string format_percent(double fraction);

// Rows are written in the order given.
void write_report_csv(std::ostream& out, const std::vector<NamedRow>& rows);
void write_report_markdown(std::ostream& out,
                           const std::vector<NamedRow>& rows);

// Raw fractions: `name,seen,unseen,hm,auc`.
void write_metrics_csv(std::ostream& out, const std::vector<NamedRow>& rows);
std::vector<NamedRow> read_metrics_csv(std::istream& in);

// `bias<TAB>seen_acc<TAB>unseen_acc`.
void write_curve(std::ostream& out, const GzslCurve& curve);

}  // namespace kgzsl::eval

#endif  // KGZSL_EVAL_METRICS_H_
