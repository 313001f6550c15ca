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

#include "kgzsl/zsl/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::zsl {

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  s = trim(s);
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  if (s == "test") return Split::kTest;
  throw Error(ErrorCode::kMalformedLine,
              "unknown split '" + std::string(s) + "'");
}

bool ClassPartition::is_seen(const kg::ConceptId& c) const {
  return std::binary_search(seen.begin(), seen.end(), c);
}

bool ClassPartition::is_unseen(const kg::ConceptId& c) const {
  return std::binary_search(unseen.begin(), unseen.end(), c);
}

std::vector<kg::ConceptId> ClassPartition::class_order() const {
  std::vector<kg::ConceptId> order = seen;
  order.insert(order.end(), unseen.begin(), unseen.end());
  return order;
}

void FeatureDataset::validate() const {
  std::vector<kg::ConceptId> overlap;
  std::set_intersection(classes.seen.begin(), classes.seen.end(),
                        classes.unseen.begin(), classes.unseen.end(),
                        std::back_inserter(overlap));
  if (!overlap.empty()) {
    throw Error(ErrorCode::kInvalidDataset,
                "class '" + overlap.front().str() + "' is both seen and unseen");
  }
  std::set<std::string> ids;
  for (const auto& item : items) {
    if (!ids.insert(item.id).second) {
      throw Error(ErrorCode::kInvalidDataset,
                  "duplicate sample id '" + item.id + "'");
    }
    if (item.feature.size() != dim) {
      throw Error(ErrorCode::kDimMismatch,
                  "sample '" + item.id + "' has " +
                      std::to_string(item.feature.size()) +
                      " features, expected " + std::to_string(dim));
    }
    const bool seen = classes.is_seen(item.label);
    if (!seen && !classes.is_unseen(item.label)) {
      throw Error(ErrorCode::kInvalidDataset,
                  "sample '" + item.id + "' has unknown label '" +
                      item.label.str() + "'");
    }
    if (!seen && item.split != Split::kTest) {
      throw Error(ErrorCode::kUnseenLabelInTrain,
                  "sample '" + item.id + "' in split " +
                      std::string(split_name(item.split)) +
                      " has unseen label '" + item.label.str() + "'");
    }
  }
}

std::vector<const FeatureItem*> FeatureDataset::in_split(Split s) const {
  std::vector<const FeatureItem*> out;
  for (const auto& item : items) {
    if (item.split == s) out.push_back(&item);
  }
  return out;
}

ClassPartition read_classes(std::istream& in) {
  ClassPartition p;
  for_each_record(in, [&](size_t line, std::string_view text) {
    const auto f = split(text, '\t');
    const std::string where = "classes line " + std::to_string(line);
    if (f.size() != 2) {
      throw Error(ErrorCode::kMalformedLine, where + ": expected 2 fields");
    }
    kg::ConceptId c = kg::normalize_concept(f[0]);
    const auto tag = trim(f[1]);
    if (tag == "seen") {
      p.seen.push_back(std::move(c));
    } else if (tag == "unseen") {
      p.unseen.push_back(std::move(c));
    } else {
      throw Error(ErrorCode::kMalformedLine, where + ": bad partition tag");
    }
  });
  for (auto* v : {&p.seen, &p.unseen}) {
    std::sort(v->begin(), v->end());
    if (std::adjacent_find(v->begin(), v->end()) != v->end()) {
      throw Error(ErrorCode::kInvalidDataset, "duplicate class in classes file");
    }
  }
  return p;
}

void write_classes(std::ostream& out, const ClassPartition& p) {
  for (const auto& c : p.seen) out << c.str() << "\tseen\n";
  for (const auto& c : p.unseen) out << c.str() << "\tunseen\n";
}

FeatureDataset read_features(std::istream& features, std::istream& classes) {
  FeatureDataset d;
  d.classes = read_classes(classes);
  bool have_dim = false;
  for_each_record(features, [&](size_t line, std::string_view text) {
    const std::string where = "features line " + std::to_string(line);
    if (!have_dim) {
      const auto f = split_whitespace(text);
      const auto n = f.size() == 2 && f[0] == "dim" ? parse_int(f[1])
                                                    : std::nullopt;
      if (!n || *n <= 0) {
        throw Error(ErrorCode::kMalformedLine,
                    where + ": expected header 'dim F'");
      }
      d.dim = static_cast<size_t>(*n);
      have_dim = true;
      return;
    }
    const auto f = split(text, '\t');
    if (f.size() != 4) {
      throw Error(ErrorCode::kMalformedLine, where + ": expected 4 fields");
    }
    FeatureItem item;
    item.id = std::string(trim(f[0]));
    item.split = parse_split(f[1]);
    item.label = kg::normalize_concept(f[2]);
    for (auto cell : split_whitespace(f[3])) {
      const auto v = parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::kMalformedLine, where + ": bad feature value");
      }
      item.feature.push_back(*v);
    }
    d.items.push_back(std::move(item));
  });
  if (!have_dim) {
    throw Error(ErrorCode::kMalformedLine, "features file has no header");
  }
  d.validate();
  return d;
}

void write_features(std::ostream& out, const FeatureDataset& d) {
  out << "dim " << d.dim << '\n';
  for (const auto& item : d.items) {
    out << item.id << '\t' << split_name(item.split) << '\t'
        << item.label.str() << '\t';
    for (size_t k = 0; k < item.feature.size(); ++k) {
      if (k) out << ' ';
      out << format_double(item.feature[k]);
    }
    out << '\n';
  }
}

numerics::Matrix stack_features(const std::vector<const FeatureItem*>& items,
                                size_t dim) {
  numerics::Matrix m(items.size(), dim);
  for (size_t i = 0; i < items.size(); ++i) {
    check_shape(items[i]->feature.size() == dim,
                "feature width does not match");
    std::copy(items[i]->feature.begin(), items[i]->feature.end(),
              m.row(i).begin());
  }
  return m;
}

}  // namespace kgzsl::zsl
