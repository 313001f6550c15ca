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

#include "kgzsl/kg/builder.h"

#include <algorithm>
#include <sstream>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::kg {

double wu_palmer(const Taxonomy& t, const ConceptId& a, const ConceptId& b) {
  const auto anc_a = t.ancestors(a);
  const auto anc_b = t.ancestors(b);
  int best = 0;
  for (const auto& c : anc_a) {
    if (anc_b.count(c) > 0) best = std::max(best, t.depth(c));
  }
  if (best == 0) {
    throw Error(ErrorCode::kNoCommonSubsumer,
                "'" + a.str() + "' and '" + b.str() +
                    "' share no common subsumer");
  }
  const double sim =
      2.0 * best / static_cast<double>(t.depth(a) + t.depth(b));
  return std::min(1.0, sim);
}

std::string_view source_kind_name(SourceKind s) {
  switch (s) {
    case SourceKind::kConceptNet: return "CN";
    case SourceKind::kWordNet: return "WN";
    case SourceKind::kCombined: return "CN+WN";
  }
  return "?";
}

SourceKind parse_source_kind(std::string_view s) {
  if (s == "CN") return SourceKind::kConceptNet;
  if (s == "WN") return SourceKind::kWordNet;
  if (s == "CN+WN") return SourceKind::kCombined;
  throw Error(ErrorCode::kConfig, "unknown graph source '" + std::string(s) +
                                      "' (expected CN, WN or CN+WN)");
}

void BuildPolicy::validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidPolicy, why);
  };
  if (max_hops < 0) fail("max_hops must be >= 0");
  if (const auto* w = std::get_if<WeightThreshold>(&rule)) {
    if (!(w->min_weight >= 0.0)) fail("weight threshold must be >= 0");
  }
  if (const auto* w = std::get_if<WupThreshold>(&rule)) {
    if (!(w->min_similarity > 0.0 && w->min_similarity <= 1.0)) {
      fail("Wu-Palmer threshold must lie in (0, 1]");
    }
  }
  if (const auto* a = std::get_if<AncestorFilter>(&rule)) {
    if (a->allowed_roots.empty()) fail("ancestor filter needs allowed roots");
  }
}

std::string describe_rule(const InclusionRule& rule) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IncludeAll>) {
          out << "all";
        } else if constexpr (std::is_same_v<T, WeightThreshold>) {
          out << "weight>=" << format_double(r.min_weight);
        } else if constexpr (std::is_same_v<T, WupThreshold>) {
          out << "wup>=" << format_double(r.min_similarity)
              << (r.reference == WupReference::kSeed ? "@seed" : "@frontier");
        } else {
          out << "ancestor in {";
          bool first = true;
          for (const auto& root : r.allowed_roots) {
            out << (first ? "" : ",") << root.str();
            first = false;
          }
          out << "}";
        }
      },
      rule);
  return out.str();
}

bool passes(const InclusionRule& rule, const SourceEdge& edge,
            const InclusionContext& ctx) {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IncludeAll>) {
          return true;
        } else if constexpr (std::is_same_v<T, WeightThreshold>) {
          return edge.weight >= r.min_weight;
        } else if constexpr (std::is_same_v<T, WupThreshold>) {
          if (ctx.taxonomy == nullptr) {
            throw Error(ErrorCode::kInvalidPolicy,
                        "Wu-Palmer rule requires a taxonomy");
          }
          const ConceptId& ref = r.reference == WupReference::kSeed
                                     ? ctx.origin_seed
                                     : ctx.frontier;
          return wu_palmer(*ctx.taxonomy, ref, ctx.candidate) >=
                 r.min_similarity;
        } else {
          if (ctx.taxonomy == nullptr) {
            throw Error(ErrorCode::kInvalidPolicy,
                        "ancestor filter requires a taxonomy");
          }
          if (!ctx.taxonomy->contains(ctx.candidate)) return false;
          for (const auto& a : ctx.taxonomy->ancestors(ctx.candidate)) {
            if (r.allowed_roots.count(a) > 0) return true;
          }
          return false;
        }
      },
      rule);
}

std::vector<SeedSpec> parse_seed_file(std::istream& in) {
  std::vector<SeedSpec> seeds;
  for_each_record(in, [&](size_t line, std::string_view record) {
    const auto fields = split(record, '\t');
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "seed file expects class<TAB>seen|unseen at line " +
                      std::to_string(line));
    }
    const auto label = parse_seed_label(fields[1]);
    if (label == SeedLabel::kNone) {
      throw Error(ErrorCode::kMalformedLine,
                  "seed label must be seen or unseen at line " +
                      std::to_string(line));
    }
    seeds.push_back(SeedSpec{std::string(trim(fields[0])), label});
  });
  return seeds;
}

ExpandResult expand(const EdgeIndex& source, const std::vector<SeedSpec>& seeds,
                    const BuildPolicy& policy, const Taxonomy* taxonomy,
                    SeedMode mode) {
  policy.validate();
  if (seeds.empty()) throw Error(ErrorCode::kEmptySeedSet, "no seeds given");

  ExpandResult result;
  std::map<ConceptId, SeedLabel> labels;
  for (const auto& s : seeds) {
    ConceptId c;
    try {
      c = normalize_concept(s.name);
    } catch (const Error&) {
      result.unresolved.push_back(s.name);
      continue;
    }
    const auto [it, inserted] = labels.emplace(c, s.label);
    if (!inserted && it->second != s.label) {
      throw Error(ErrorCode::kSeedConflict,
                  "seed '" + c.str() + "' is listed as both seen and unseen");
    }
    if (inserted && !source.contains(c)) {
      result.unresolved.push_back(s.name);
    }
  }
  if (mode == SeedMode::kStrict && !result.unresolved.empty()) {
    std::string list;
    for (const auto& u : result.unresolved) {
      list += (list.empty() ? "" : ", ") + u;
    }
    throw Error(ErrorCode::kUnresolvableSeed, "unresolvable seeds: " + list);
  }
  if (labels.empty()) {
    throw Error(ErrorCode::kEmptySeedSet, "no seed could be resolved");
  }

  GraphParts parts;
  std::map<ConceptId, ConceptId> origin;
  std::set<ConceptId> frontier;
  for (const auto& [c, label] : labels) {
    parts.nodes.emplace(c, GraphParts::NodeInfo{0, label, std::nullopt});
    origin.emplace(c, c);
    frontier.insert(c);
  }

  const bool tolerant_wup = std::holds_alternative<WupThreshold>(policy.rule);
  for (int level = 0; level < policy.max_hops && !frontier.empty(); ++level) {
    std::set<ConceptId> next;
    for (const auto& u : frontier) {
      for (const auto& e : source.neighbors(u)) {
        const ConceptId& v = other_endpoint(e, u);
        if (parts.nodes.count(v) > 0) continue;
        bool admit = false;
        try {
          admit = passes(policy.rule, e,
                         InclusionContext{u, v, origin.at(u), taxonomy});
        } catch (const Error& err) {
          // Concepts outside the taxonomy cannot be scored; they are
          // rejected rather than aborting the whole build.
          const bool unscorable =
              err.code() == ErrorCode::kUnknownConcept ||
              err.code() == ErrorCode::kNoCommonSubsumer;
          if (!tolerant_wup || !unscorable) throw;
        }
        if (!admit) continue;
        parts.nodes.emplace(v, GraphParts::NodeInfo{level + 1, SeedLabel::kNone,
                                                    std::nullopt});
        origin.emplace(v, origin.at(u));
        next.insert(v);
      }
    }
    frontier = std::move(next);
  }

  for (const auto& [u, info] : parts.nodes) {
    for (const auto& e : source.neighbors(u)) {
      if (parts.nodes.count(other_endpoint(e, u)) == 0) continue;
      parts.relations.emplace(e.relation.label, e.relation.category);
      auto [it, inserted] = parts.edges.emplace(
          GraphParts::EdgeKey{e.start, e.end, e.relation.label}, e.weight);
      if (!inserted) it->second = std::max(it->second, e.weight);
    }
  }
  result.graph = KnowledgeGraph::from_parts(parts);
  return result;
}

KnowledgeGraph merge(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  GraphParts parts = a.to_parts();
  const GraphParts other = b.to_parts();
  for (const auto& [name, info] : other.nodes) {
    auto [it, inserted] = parts.nodes.emplace(name, info);
    if (inserted) continue;
    auto& mine = it->second;
    mine.hop = std::min(mine.hop, info.hop);
    if (mine.seed != SeedLabel::kNone && info.seed != SeedLabel::kNone &&
        mine.seed != info.seed) {
      throw Error(ErrorCode::kSeedConflict,
                  "'" + name.str() + "' is seen in one graph, unseen in the "
                  "other");
    }
    if (mine.seed == SeedLabel::kNone) mine.seed = info.seed;
    if (!mine.lookup) mine.lookup = info.lookup;
  }
  for (const auto& [label, category] : other.relations) {
    auto [it, inserted] = parts.relations.emplace(label, category);
    if (!inserted) it->second = std::min(it->second, category);
  }
  for (const auto& [key, weight] : other.edges) {
    auto [it, inserted] = parts.edges.emplace(key, weight);
    if (!inserted) it->second = std::max(it->second, weight);
  }
  return KnowledgeGraph::from_parts(parts);
}

KnowledgeGraph remap_state_nodes(
    const KnowledgeGraph& g, const std::map<ConceptId, ConceptId>& mapping) {
  GraphParts parts = g.to_parts();
  for (const auto& [from, to] : mapping) {
    auto it = parts.nodes.find(from);
    if (it == parts.nodes.end()) {
      throw Error(ErrorCode::kUnknownMappingTarget,
                  "mapped concept '" + from.str() + "' is not a node");
    }
    if (parts.nodes.count(to) == 0) {
      throw Error(ErrorCode::kUnknownMappingTarget,
                  "mapping target '" + to.str() + "' is not a node");
    }
    if (to == from) {
      it->second.lookup.reset();
    } else {
      it->second.lookup = to;
    }
  }
  return KnowledgeGraph::from_parts(parts);
}

}  // namespace kgzsl::kg
