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

#ifndef KGZSL_EVAL_SCORES_H_
#define KGZSL_EVAL_SCORES_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "kgzsl/numerics/matrix.h"

namespace kgzsl::eval {

// Per-sample class scores together with the class order they refer to.
struct ScoreSet {
  std::vector<std::string> classes;
  std::vector<bool> seen;  // one flag per class
  std::vector<std::string> ids;
  std::vector<size_t> labels;  // class index of each sample
  numerics::Matrix scores;     // samples x classes

  size_t num_samples() const { return ids.size(); }
  size_t num_classes() const { return classes.size(); }
  // kInvalidDataset on inconsistent sizes, labels out of range or
  // non-finite scores.
  void validate() const;
};

// `id<TAB>label<TAB>s1 s2 ... sC`, one line per sample.
void write_scores(std::ostream& out, const ScoreSet& s);
// `class<TAB>seen|unseen` in score-column order.
void write_class_manifest(std::ostream& out, const ScoreSet& s);
ScoreSet read_scores(std::istream& scores, std::istream& manifest);

}  // namespace kgzsl::eval

#endif  // KGZSL_EVAL_SCORES_H_
