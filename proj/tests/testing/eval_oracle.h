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

#ifndef KGZSL_TESTING_EVAL_ORACLE_H_
#define KGZSL_TESTING_EVAL_ORACLE_H_

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kgzsl/eval/scores.h"
#include "kgzsl/numerics/random.h"

namespace kgzsl::testing {

// Scores drawn from {-1, -7/8, ..., 1}. Differences of such values are
// exact, so equal critical biases compare equal.
inline eval::ScoreSet quantized_scores(size_t samples, size_t seen,
                                       size_t unseen, numerics::Rng& rng) {
  eval::ScoreSet s;
  const size_t classes = seen + unseen;
  for (size_t c = 0; c < classes; ++c) {
    s.classes.push_back("c" + std::to_string(c));
    s.seen.push_back(c < seen);
  }
  s.scores = numerics::Matrix(samples, classes);
  for (size_t i = 0; i < samples; ++i) {
    s.ids.push_back("x" + std::to_string(i));
    // Both groups need at least one sample.
    if (i == 0) {
      s.labels.push_back(rng.uniform_index(seen));
    } else if (i == 1) {
      s.labels.push_back(seen + rng.uniform_index(unseen));
    } else {
      s.labels.push_back(rng.uniform_index(classes));
    }
    for (size_t c = 0; c < classes; ++c) {
      s.scores(i, c) = static_cast<double>(
                           static_cast<int64_t>(rng.uniform_index(17)) - 8) /
                       8.0;
    }
  }
  return s;
}

// Argmax over every class after the bias, scanning in class order so the
// first maximum wins.
inline size_t brute_predict(const eval::ScoreSet& s, size_t row, double bias) {
  size_t best = 0;
  double best_v = 0.0;
  for (size_t c = 0; c < s.num_classes(); ++c) {
    const double v = s.scores(row, c) + (s.seen[c] ? 0.0 : bias);
    if (c == 0 || v > best_v) {
      best = c;
      best_v = v;
    }
  }
  return best;
}

inline std::pair<double, double> brute_accuracies(const eval::ScoreSet& s,
                                                  double bias) {
  size_t seen_n = 0, seen_hit = 0, unseen_n = 0, unseen_hit = 0;
  for (size_t i = 0; i < s.num_samples(); ++i) {
    const bool hit = brute_predict(s, i, bias) == s.labels[i];
    if (s.seen[s.labels[i]]) {
      ++seen_n;
      seen_hit += hit;
    } else {
      ++unseen_n;
      unseen_hit += hit;
    }
  }
  return {static_cast<double>(seen_hit) / static_cast<double>(seen_n),
          static_cast<double>(unseen_hit) / static_cast<double>(unseen_n)};
}

// (seen, unseen) pairs over `count` uniform biases in [lo, hi], offset by
// half a step. With [-3, 3] and 10^4 points no grid bias comes within
// 1e-4 of a multiple of 1/8.
inline std::set<std::pair<double, double>> dense_grid_pairs(
    const eval::ScoreSet& s, double lo, double hi, size_t count) {
  std::set<std::pair<double, double>> out;
  const double step = (hi - lo) / static_cast<double>(count);
  for (size_t k = 0; k < count; ++k) {
    out.insert(brute_accuracies(
        s, lo + (static_cast<double>(k) + 0.5) * step));
  }
  return out;
}

// Highest harmonic mean among (seen, unseen) pairs.
inline double pairs_best_hm(const std::set<std::pair<double, double>>& pairs) {
  double best = 0.0;
  for (const auto& [s, u] : pairs) {
    if (s + u > 0) best = std::max(best, 2.0 * s * u / (s + u));
  }
  return best;
}

// Area of the polygon (0,0), (0,seen_max), points by unseen ascending,
// (unseen_max,0), by the shoelace formula. x is unseen, y is seen.
inline double pairs_auc(const std::set<std::pair<double, double>>& pairs) {
  std::vector<std::pair<double, double>> xy;
  double seen_max = 0.0, unseen_max = 0.0;
  for (const auto& [s, u] : pairs) {
    xy.emplace_back(u, s);
    seen_max = std::max(seen_max, s);
    unseen_max = std::max(unseen_max, u);
  }
  std::sort(xy.begin(), xy.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  xy.insert(xy.begin(), {0.0, seen_max});
  xy.insert(xy.begin(), {0.0, 0.0});
  xy.emplace_back(unseen_max, 0.0);
  double twice = 0.0;
  for (size_t i = 0; i < xy.size(); ++i) {
    const auto& [x0, y0] = xy[i];
    const auto& [x1, y1] = xy[(i + 1) % xy.size()];
    twice += x0 * y1 - x1 * y0;
  }
  return std::abs(twice) / 2.0;
}

}  // namespace kgzsl::testing

#endif  // KGZSL_TESTING_EVAL_ORACLE_H_
