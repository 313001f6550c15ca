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

#ifndef KGZSL_KG_SOURCE_H_
#define KGZSL_KG_SOURCE_H_

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "kgzsl/kg/concept.h"

namespace kgzsl::kg {

struct SourceEdge {
  ConceptId start;
  ConceptId end;
  RelationType relation;
  double weight = 1.0;

  friend auto operator<=>(const SourceEdge&, const SourceEdge&) = default;
};

enum class ParseMode { kStrict, kSkipMalformed };

struct EdgeDumpOptions {
  ParseMode mode = ParseMode::kStrict;
  RelationCategory category = RelationCategory::kCommonSense;
  // Lines whose URIs carry another "/c/<lang>/" prefix are filtered out.
  std::string language = "en";
};

struct EdgeDumpResult {
  std::vector<SourceEdge> edges;
  size_t skipped = 0;   // malformed lines dropped in skip mode
  size_t filtered = 0;  // other-language lines
};

// Parses `start<TAB>relation<TAB>end<TAB>weight` records; '#' lines are
// comments. Strict mode throws kMalformedLine / kNegativeWeight / kSelfLoop
// naming the line number.
EdgeDumpResult parse_edge_dump(std::istream& in,
                               const EdgeDumpOptions& options = {});

void write_edge_dump(std::ostream& out, const std::vector<SourceEdge>& edges);

// Immutable parsed edge set indexed by endpoint. Edges are undirected for
// lookup but keep their stored orientation.
class EdgeIndex {
 public:
  EdgeIndex() = default;
  explicit EdgeIndex(std::vector<SourceEdge> edges);

  // Every edge touching `c`, sorted by (relation label, other endpoint,
  // weight, start). Unknown concepts yield an empty list.
  std::vector<SourceEdge> neighbors(const ConceptId& c) const;
  bool contains(const ConceptId& c) const { return by_node_.count(c) > 0; }
  const std::vector<SourceEdge>& edges() const { return edges_; }
  size_t size() const { return edges_.size(); }

 private:
  std::vector<SourceEdge> edges_;
  std::map<ConceptId, std::vector<size_t>> by_node_;
};

const ConceptId& other_endpoint(const SourceEdge& e, const ConceptId& from);

}  // namespace kgzsl::kg

#endif  // KGZSL_KG_SOURCE_H_
