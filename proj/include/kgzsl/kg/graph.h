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

#ifndef KGZSL_KG_GRAPH_H_
#define KGZSL_KG_GRAPH_H_

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "kgzsl/kg/concept.h"

namespace kgzsl::kg {

enum class SeedLabel { kNone, kSeen, kUnseen };

std::string_view seed_label_name(SeedLabel label);  // "-", "seen", "unseen"
SeedLabel parse_seed_label(std::string_view text);

struct GraphNode {
  ConceptId name;
  int hop = 0;
  SeedLabel seed = SeedLabel::kNone;
  // Node whose embedding stands in for this one. Equal to the node's own
  // index unless redirected by remap_state_nodes().
  size_t lookup = 0;
};

struct GraphEdge {
  size_t src = 0;
  size_t dst = 0;
  size_t relation = 0;
  double weight = 1.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Name-keyed description of a graph; the mutable form used while building
// and merging.
struct GraphParts {
  struct NodeInfo {
    int hop = 0;
    SeedLabel seed = SeedLabel::kNone;
    std::optional<ConceptId> lookup;
  };
  using EdgeKey = std::tuple<ConceptId, ConceptId, std::string>;

  std::map<ConceptId, NodeInfo> nodes;
  std::map<std::string, RelationCategory> relations;
  std::map<EdgeKey, double> edges;
};

// Immutable indexed knowledge graph in canonical order: nodes sorted by
// (hop, name), relations by label, edges by (src, dst, relation). Two
// graphs with the same content therefore serialize identically.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  // Validates references and canonicalizes. Throws kMalformedLine on
  // dangling endpoints, relations or lookup targets.
  static KnowledgeGraph from_parts(const GraphParts& parts);
  GraphParts to_parts() const;

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<RelationType>& relations() const { return relations_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  size_t num_nodes() const { return nodes_.size(); }

  std::optional<size_t> find(const ConceptId& c) const;
  // Seed node indices in canonical order.
  std::vector<size_t> seeds() const;
  int max_hop() const;

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

 private:
  std::vector<GraphNode> nodes_;
  std::vector<RelationType> relations_;
  std::vector<GraphEdge> edges_;
  std::map<ConceptId, size_t> index_;
};

struct GraphStats {
  size_t nodes = 0;
  size_t edges = 0;
  size_t relation_types = 0;
  std::vector<size_t> per_hop;  // per_hop[h] = nodes at hop distance h
};

GraphStats graph_stats(const KnowledgeGraph& g);

// Sectioned text container:
//   kgzsl-graph v1
//   NODES n      then  index name hop seed lookup   (tab separated)
//   RELATIONS r  then  index label CS|LX
//   EDGES e      then  src dst relation weight
void write_graph(std::ostream& out, const KnowledgeGraph& g);
KnowledgeGraph read_graph(std::istream& in);

}  // namespace kgzsl::kg

#endif  // KGZSL_KG_GRAPH_H_
