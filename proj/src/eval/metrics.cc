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

#include "kgzsl/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::eval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Best seen and best unseen class of one sample, independent of the bias.
struct Contest {
  size_t seen = 0;
  size_t unseen = 0;
  double critical = 0.0;  // max_seen - max_unseen
};

Contest contest(const ScoreSet& s, size_t row) {
  const auto r = s.scores.row(row);
  Contest c;
  bool have_seen = false;
  bool have_unseen = false;
  for (size_t k = 0; k < r.size(); ++k) {
    if (s.seen[k]) {
      if (!have_seen || r[k] > r[c.seen]) c.seen = k;
      have_seen = true;
    } else {
      if (!have_unseen || r[k] > r[c.unseen]) c.unseen = k;
      have_unseen = true;
    }
  }
  if (!have_seen || !have_unseen) {
    throw Error(ErrorCode::kDegeneratePartition,
                "need at least one seen and one unseen class");
  }
  c.critical = r[c.seen] - r[c.unseen];
  return c;
}

size_t decide(const Contest& c, double bias) {
  if (bias > c.critical) return c.unseen;
  if (bias < c.critical) return c.seen;
  return std::min(c.seen, c.unseen);
}

void check_partition(const ScoreSet& s) {
  const bool any_seen = std::find(s.seen.begin(), s.seen.end(), true) !=
                        s.seen.end();
  const bool any_unseen = std::find(s.seen.begin(), s.seen.end(), false) !=
                          s.seen.end();
  if (!any_seen || !any_unseen) {
    throw Error(ErrorCode::kDegeneratePartition,
                "need at least one seen and one unseen class");
  }
}

double accuracy_from(const ScoreSet& s, const std::vector<bool>& group,
                     const std::vector<size_t>& predicted,
                     Averaging averaging) {
  std::vector<size_t> hits(s.num_classes(), 0);
  std::vector<size_t> count(s.num_classes(), 0);
  size_t total = 0;
  for (size_t i = 0; i < s.num_samples(); ++i) {
    const size_t l = s.labels[i];
    if (!group[l]) continue;
    ++total;
    ++count[l];
    if (predicted[i] == l) ++hits[l];
  }
  if (total == 0) {
    throw Error(ErrorCode::kEmptyGroup, "no test sample belongs to the group");
  }
  if (averaging == Averaging::kPerSample) {
    size_t h = 0;
    for (size_t v : hits) h += v;
    return static_cast<double>(h) / static_cast<double>(total);
  }
  double sum = 0.0;
  size_t classes = 0;
  for (size_t c = 0; c < count.size(); ++c) {
    if (count[c] == 0) continue;
    sum += static_cast<double>(hits[c]) / static_cast<double>(count[c]);
    ++classes;
  }
  return sum / static_cast<double>(classes);
}

std::vector<bool> negate(const std::vector<bool>& v) {
  std::vector<bool> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = !v[i];
  return out;
}

}  // namespace

size_t predict(const ScoreSet& s, size_t row, double bias) {
  return decide(contest(s, row), bias);
}

double group_accuracy(const ScoreSet& s, const std::vector<bool>& group,
                      double bias, Averaging averaging) {
  s.validate();
  check_shape(group.size() == s.num_classes(),
              "group mask does not match the classes");
  check_partition(s);
  std::vector<size_t> predicted(s.num_samples());
  for (size_t i = 0; i < s.num_samples(); ++i) predicted[i] = predict(s, i, bias);
  return accuracy_from(s, group, predicted, averaging);
}

double seen_accuracy(const ScoreSet& s, double bias, Averaging averaging) {
  return group_accuracy(s, s.seen, bias, averaging);
}

double unseen_accuracy(const ScoreSet& s, double bias, Averaging averaging) {
  return group_accuracy(s, negate(s.seen), bias, averaging);
}

CriticalBiases critical_biases(const ScoreSet& s) {
  s.validate();
  check_partition(s);
  CriticalBiases out;
  for (size_t i = 0; i < s.num_samples(); ++i) {
    out.critical.push_back(contest(s, i).critical);
  }
  std::sort(out.critical.begin(), out.critical.end());
  out.critical.erase(std::unique(out.critical.begin(), out.critical.end()),
                     out.critical.end());
  out.points.push_back(-kInf);
  for (size_t k = 1; k < out.critical.size(); ++k) {
    out.points.push_back(out.critical[k - 1] +
                         (out.critical[k] - out.critical[k - 1]) / 2.0);
  }
  out.points.push_back(kInf);
  return out;
}

double GzslCurve::seen_max() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.seen_acc);
  return m;
}

double GzslCurve::unseen_max() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.unseen_acc);
  return m;
}

GzslCurve bias_sweep(const ScoreSet& s, Averaging averaging) {
  const auto biases = critical_biases(s);
  std::vector<Contest> contests;
  for (size_t i = 0; i < s.num_samples(); ++i) contests.push_back(contest(s, i));
  const auto unseen = negate(s.seen);
  GzslCurve curve;
  std::vector<size_t> predicted(s.num_samples());
  for (double b : biases.points) {
    for (size_t i = 0; i < contests.size(); ++i) {
      predicted[i] = decide(contests[i], b);
    }
    curve.points.push_back({b, accuracy_from(s, s.seen, predicted, averaging),
                            accuracy_from(s, unseen, predicted, averaging)});
  }
  return curve;
}

double harmonic_mean(double a, double b) {
  return a + b == 0.0 ? 0.0 : 2.0 * a * b / (a + b);
}

double best_hm(const GzslCurve& curve) {
  double best = 0.0;
  for (const auto& p : curve.points) {
    best = std::max(best, harmonic_mean(p.seen_acc, p.unseen_acc));
  }
  return best;
}

double auc(const GzslCurve& curve) {
  std::vector<std::pair<double, double>> xy;  // (unseen, seen)
  xy.emplace_back(0.0, curve.seen_max());
  for (const auto& p : curve.points) xy.emplace_back(p.unseen_acc, p.seen_acc);
  std::sort(xy.begin() + 1, xy.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  xy.emplace_back(curve.unseen_max(), 0.0);
  double area = 0.0;
  for (size_t k = 1; k < xy.size(); ++k) {
    area += (xy[k].first - xy[k - 1].first) *
            (xy[k].second + xy[k - 1].second) / 2.0;
  }
  return area;
}

MetricsRow summarize(const GzslCurve& curve) {
  return {curve.seen_max(), curve.unseen_max(), best_hm(curve), auc(curve)};
}

std::string format_percent(double fraction) {
  // Round on the scaled integer so 0.865 renders as 86.5, not 86.4.
  const long long tenths = std::llround(fraction * 1000.0);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%lld", tenths < 0 ? "-" : "",
                std::llabs(tenths) / 10, std::llabs(tenths) % 10);
  return buf;
}

void write_report_csv(std::ostream& out, const std::vector<NamedRow>& rows) {
  out << "Model,Seen,Unseen,HM,AUC\n";
  for (const auto& r : rows) {
    out << r.name << ',' << format_percent(r.row.best_seen) << ','
        << format_percent(r.row.best_unseen) << ','
        << format_percent(r.row.best_hm) << ',' << format_percent(r.row.auc)
        << '\n';
  }
}

void write_report_markdown(std::ostream& out,
                           const std::vector<NamedRow>& rows) {
  out << "| Model | Seen | Unseen | HM | AUC |\n";
  out << "|---|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    out << "| " << r.name << " | " << format_percent(r.row.best_seen) << " | "
        << format_percent(r.row.best_unseen) << " | "
        << format_percent(r.row.best_hm) << " | "
        << format_percent(r.row.auc) << " |\n";
  }
}

void write_metrics_csv(std::ostream& out, const std::vector<NamedRow>& rows) {
  out << "name,seen,unseen,hm,auc\n";
  for (const auto& r : rows) {
    out << r.name << ',' << format_double(r.row.best_seen) << ','
        << format_double(r.row.best_unseen) << ','
        << format_double(r.row.best_hm) << ',' << format_double(r.row.auc)
        << '\n';
  }
}

std::vector<NamedRow> read_metrics_csv(std::istream& in) {
  std::vector<NamedRow> rows;
  bool header = true;
  for_each_record(in, [&](size_t line, std::string_view text) {
    if (header) {
      header = false;
      return;
    }
    const auto f = split(text, ',');
    std::vector<double> v;
    for (size_t k = 1; k < f.size(); ++k) {
      const auto d = parse_double(f[k]);
      if (!d) break;
      v.push_back(*d);
    }
    if (f.size() != 5 || v.size() != 4) {
      throw Error(ErrorCode::kMalformedLine,
                  "metrics line " + std::to_string(line) + " is malformed");
    }
    rows.push_back({std::string(f[0]), {v[0], v[1], v[2], v[3]}});
  });
  return rows;
}

void write_curve(std::ostream& out, const GzslCurve& curve) {
  out << "bias\tseen_acc\tunseen_acc\n";
  for (const auto& p : curve.points) {
    out << format_double(p.bias) << '\t' << format_double(p.seen_acc) << '\t'
        << format_double(p.unseen_acc) << '\n';
  }
}

}  // namespace kgzsl::eval
