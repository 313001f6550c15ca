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

#ifndef KGZSL_KG_BUILDER_H_
#define KGZSL_KG_BUILDER_H_

#include <istream>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "kgzsl/kg/concept.h"
#include "kgzsl/kg/graph.h"
#include "kgzsl/kg/source.h"
#include "kgzsl/kg/taxonomy.h"

namespace kgzsl::kg {

// 2 * depth(LCS) / (depth(a) + depth(b)), with the least common subsumer
// chosen as the deepest reflexive common ancestor. Clamped to 1 because
// min-depth can make a multi-parent ancestor deeper than its descendant.
// Throws kUnknownConcept or kNoCommonSubsumer.
double wu_palmer(const Taxonomy& t, const ConceptId& a, const ConceptId& b);

struct IncludeAll {};
struct WeightThreshold {
  double min_weight = 1.0;
};
enum class WupReference { kFrontier, kSeed };
struct WupThreshold {
  double min_similarity = 0.5;
  WupReference reference = WupReference::kFrontier;
};
struct AncestorFilter {
  std::set<ConceptId> allowed_roots;
};
using InclusionRule =
    std::variant<IncludeAll, WeightThreshold, WupThreshold, AncestorFilter>;

enum class SourceKind { kConceptNet, kWordNet, kCombined };
std::string_view source_kind_name(SourceKind s);  // "CN", "WN", "CN+WN"
SourceKind parse_source_kind(std::string_view s);

struct BuildPolicy {
  int max_hops = 2;
  InclusionRule rule = IncludeAll{};
  SourceKind source = SourceKind::kConceptNet;

  // Throws kInvalidPolicy when an invariant is violated.
  void validate() const;
};

std::string describe_rule(const InclusionRule& rule);

struct InclusionContext {
  const ConceptId& frontier;
  const ConceptId& candidate;
  // Seed from which the frontier node was reached.
  const ConceptId& origin_seed;
  const Taxonomy* taxonomy = nullptr;
};

// Whether `edge` admits `ctx.candidate`. Errors from wu_palmer propagate;
// WupThreshold and AncestorFilter without a taxonomy throw kInvalidPolicy.
bool passes(const InclusionRule& rule, const SourceEdge& edge,
            const InclusionContext& ctx);

struct SeedSpec {
  std::string name;  // raw class name, normalized on use
  SeedLabel label = SeedLabel::kSeen;
};

// `class<TAB>seen|unseen` records.
std::vector<SeedSpec> parse_seed_file(std::istream& in);

enum class SeedMode {
  kStrict,   // unresolvable seeds are an error
  kLenient,  // reported; absent-but-valid seeds become isolated nodes
};

struct ExpandResult {
  KnowledgeGraph graph;
  std::vector<std::string> unresolved;
};

// Breadth-first expansion from the seeds, one hop level at a time, with the
// frontier visited in name order. Nodes are admitted by the policy rule;
// every source edge between two admitted nodes is kept.
ExpandResult expand(const EdgeIndex& source, const std::vector<SeedSpec>& seeds,
                    const BuildPolicy& policy,
                    const Taxonomy* taxonomy = nullptr,
                    SeedMode mode = SeedMode::kStrict);

// Union by concept name (hop = min, duplicate edges kept once at the larger
// weight). Throws kSeedConflict when a concept is seen in one graph and
// unseen in the other.
KnowledgeGraph merge(const KnowledgeGraph& a, const KnowledgeGraph& b);

// Redirects the embedding lookup of each mapped seed. Throws
// kUnknownMappingTarget if a key or target is not a node.
KnowledgeGraph remap_state_nodes(const KnowledgeGraph& g,
                                 const std::map<ConceptId, ConceptId>& mapping);

}  // namespace kgzsl::kg

#endif  // KGZSL_KG_BUILDER_H_
