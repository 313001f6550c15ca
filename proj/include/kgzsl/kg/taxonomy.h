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

#ifndef KGZSL_KG_TAXONOMY_H_
#define KGZSL_KG_TAXONOMY_H_

#include <istream>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "kgzsl/kg/concept.h"
#include "kgzsl/kg/source.h"

namespace kgzsl::kg {

// Hypernym DAG (child -> parent). Immutable once built.
class Taxonomy {
 public:
  using Entry = std::pair<ConceptId, ConceptId>;  // (child, parent)

  Taxonomy() = default;
  // Throws kCycleDetected naming one cycle.
  static Taxonomy from_entries(std::vector<Entry> entries);

  const std::set<Entry>& entries() const { return entries_; }
  const std::set<ConceptId>& roots() const { return roots_; }
  const std::set<ConceptId>& nodes() const { return nodes_; }
  bool contains(const ConceptId& c) const { return nodes_.count(c) > 0; }
  const std::set<ConceptId>& parents(const ConceptId& c) const;

  // Root depth is 1; otherwise 1 + minimum parent depth.
  int depth(const ConceptId& c) const;
  // Reflexive ancestor set.
  std::set<ConceptId> ancestors(const ConceptId& c) const;

 private:
  std::set<Entry> entries_;
  std::set<ConceptId> nodes_;
  std::set<ConceptId> roots_;
  std::map<ConceptId, std::set<ConceptId>> parents_;
  std::map<ConceptId, int> depth_;
};

// Parses `child<TAB>parent` records.
Taxonomy parse_taxonomy(std::istream& in);

// Hypernym pairs as lexicographic source edges (child -> parent).
std::vector<SourceEdge> taxonomy_edges(const Taxonomy& t,
                                       const std::string& relation = "IsA",
                                       double weight = 1.0);

}  // namespace kgzsl::kg

#endif  // KGZSL_KG_TAXONOMY_H_
