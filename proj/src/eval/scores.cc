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

#include "kgzsl/eval/scores.h"

#include <map>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::eval {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kInvalidDataset, what);
}

}  // namespace

void ScoreSet::validate() const {
  if (seen.size() != classes.size()) bad("seen flags do not match classes");
  if (labels.size() != ids.size()) bad("labels do not match sample ids");
  if (scores.rows() != ids.size() || scores.cols() != classes.size()) {
    bad("score matrix is " + std::to_string(scores.rows()) + "x" +
        std::to_string(scores.cols()) + ", expected " +
        std::to_string(ids.size()) + "x" + std::to_string(classes.size()));
  }
  for (size_t l : labels) {
    if (l >= classes.size()) bad("label index out of range");
  }
  if (!scores.all_finite()) bad("scores contain non-finite values");
}

void write_scores(std::ostream& out, const ScoreSet& s) {
  s.validate();
  for (size_t i = 0; i < s.num_samples(); ++i) {
    out << s.ids[i] << '\t' << s.classes[s.labels[i]] << '\t';
    const auto row = s.scores.row(i);
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

void write_class_manifest(std::ostream& out, const ScoreSet& s) {
  for (size_t c = 0; c < s.classes.size(); ++c) {
    out << s.classes[c] << '\t' << (s.seen[c] ? "seen" : "unseen") << '\n';
  }
}

ScoreSet read_scores(std::istream& scores, std::istream& manifest) {
  ScoreSet s;
  std::map<std::string, size_t, std::less<>> index;
  for_each_record(manifest, [&](size_t line, std::string_view text) {
    const auto f = split(text, '\t');
    const std::string where = "class manifest line " + std::to_string(line);
    if (f.size() != 2) bad(where + ": expected 2 fields");
    const std::string name(trim(f[0]));
    const auto flag = trim(f[1]);
    if (flag != "seen" && flag != "unseen") bad(where + ": bad partition tag");
    if (!index.emplace(name, s.classes.size()).second) {
      bad(where + ": duplicate class '" + name + "'");
    }
    s.classes.push_back(name);
    s.seen.push_back(flag == "seen");
  });
  std::vector<double> values;
  for_each_record(scores, [&](size_t line, std::string_view text) {
    const auto f = split(text, '\t');
    const std::string where = "score line " + std::to_string(line);
    if (f.size() != 3) bad(where + ": expected 3 fields");
    const auto it = index.find(trim(f[1]));
    if (it == index.end()) bad(where + ": unknown label");
    const auto cells = split_whitespace(f[2]);
    if (cells.size() != s.classes.size()) {
      bad(where + ": expected " + std::to_string(s.classes.size()) +
          " scores");
    }
    for (auto cell : cells) {
      const auto v = parse_double(cell);
      if (!v) bad(where + ": bad score");
      values.push_back(*v);
    }
    s.ids.emplace_back(trim(f[0]));
    s.labels.push_back(it->second);
  });
  s.scores = numerics::Matrix::from_vector(s.ids.size(), s.classes.size(),
                                           std::move(values));
  s.validate();
  return s;
}

}  // namespace kgzsl::eval
