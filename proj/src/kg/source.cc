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

#include "kgzsl/kg/source.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::kg {

namespace {

std::string at_line(size_t line) { return " at line " + std::to_string(line); }

}  // namespace

EdgeDumpResult parse_edge_dump(std::istream& in,
                               const EdgeDumpOptions& options) {
  EdgeDumpResult result;
  const bool strict = options.mode == ParseMode::kStrict;
  auto reject = [&](ErrorCode code, const std::string& why, size_t line) {
    if (strict) throw Error(code, why + at_line(line));
    ++result.skipped;
  };
  for_each_record(in, [&](size_t line, std::string_view record) {
    const auto fields = split(record, '\t');
    if (fields.size() != 4) {
      reject(ErrorCode::kMalformedLine,
             "expected 4 tab-separated fields, got " +
                 std::to_string(fields.size()),
             line);
      return;
    }
    for (const auto raw : {fields[0], fields[2]}) {
      const auto lang = concept_language(raw);
      if (lang && *lang != options.language) {
        ++result.filtered;
        return;
      }
    }
    const auto weight = parse_double(fields[3]);
    if (!weight || !std::isfinite(*weight)) {
      reject(ErrorCode::kMalformedLine, "bad weight", line);
      return;
    }
    if (*weight < 0.0) {
      reject(ErrorCode::kNegativeWeight, "negative weight", line);
      return;
    }
    std::optional<SourceEdge> edge;
    try {
      edge = SourceEdge{normalize_concept(fields[0]),
                        normalize_concept(fields[2]),
                        {normalize_relation_label(fields[1]), options.category},
                        *weight};
    } catch (const Error& e) {
      reject(ErrorCode::kMalformedLine, e.what(), line);
      return;
    }
    if (edge->start == edge->end) {
      reject(ErrorCode::kSelfLoop, "self-loop on '" + edge->start.str() + "'",
             line);
      return;
    }
    result.edges.push_back(std::move(*edge));
  });
  return result;
}

void write_edge_dump(std::ostream& out, const std::vector<SourceEdge>& edges) {
  for (const auto& e : edges) {
    out << e.start.str() << '\t' << e.relation.label << '\t' << e.end.str()
        << '\t' << format_double(e.weight) << '\n';
  }
}

EdgeIndex::EdgeIndex(std::vector<SourceEdge> edges) : edges_(std::move(edges)) {
  for (size_t i = 0; i < edges_.size(); ++i) {
    by_node_[edges_[i].start].push_back(i);
    by_node_[edges_[i].end].push_back(i);
  }
}

const ConceptId& other_endpoint(const SourceEdge& e, const ConceptId& from) {
  return e.start == from ? e.end : e.start;
}

std::vector<SourceEdge> EdgeIndex::neighbors(const ConceptId& c) const {
  std::vector<SourceEdge> out;
  const auto it = by_node_.find(c);
  if (it == by_node_.end()) return out;
  out.reserve(it->second.size());
  for (size_t i : it->second) out.push_back(edges_[i]);
  std::sort(out.begin(), out.end(),
            [&c](const SourceEdge& a, const SourceEdge& b) {
              return std::tie(a.relation.label, other_endpoint(a, c), a.weight,
                              a.start) <
                     std::tie(b.relation.label, other_endpoint(b, c), b.weight,
                              b.start);
            });
  return out;
}

}  // namespace kgzsl::kg
