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

#include "kgzsl/kg/taxonomy.h"

#include <algorithm>
#include <deque>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::kg {

namespace {

enum class Mark { kNone, kActive, kDone };

// Iterative DFS over child -> parent links; returns one cycle if present.
std::vector<ConceptId> find_cycle(
    const std::set<ConceptId>& nodes,
    const std::map<ConceptId, std::set<ConceptId>>& parents) {
  std::map<ConceptId, Mark> mark;
  static const std::set<ConceptId> kNone;
  auto parents_of = [&](const ConceptId& c) -> const std::set<ConceptId>& {
    const auto it = parents.find(c);
    return it == parents.end() ? kNone : it->second;
  };
  for (const auto& start : nodes) {
    if (mark[start] != Mark::kNone) continue;
    struct Frame {
      ConceptId node;
      std::set<ConceptId>::const_iterator next;
    };
    std::vector<Frame> stack;
    mark[start] = Mark::kActive;
    stack.push_back({start, parents_of(start).begin()});
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == parents_of(top.node).end()) {
        mark[top.node] = Mark::kDone;
        stack.pop_back();
        continue;
      }
      const ConceptId p = *top.next++;
      if (mark[p] == Mark::kActive) {
        std::vector<ConceptId> cycle;
        auto it = std::find_if(stack.begin(), stack.end(),
                               [&p](const Frame& f) { return f.node == p; });
        for (; it != stack.end(); ++it) cycle.push_back(it->node);
        cycle.push_back(p);
        return cycle;
      }
      if (mark[p] == Mark::kNone) {
        mark[p] = Mark::kActive;
        stack.push_back({p, parents_of(p).begin()});
      }
    }
  }
  return {};
}

}  // namespace

Taxonomy Taxonomy::from_entries(std::vector<Entry> entries) {
  Taxonomy t;
  std::set<ConceptId> children;
  for (auto& [child, parent] : entries) {
    if (child == parent) {
      throw Error(ErrorCode::kCycleDetected,
                  "cycle: " + child.str() + " -> " + child.str());
    }
    t.nodes_.insert(child);
    t.nodes_.insert(parent);
    children.insert(child);
    t.parents_[child].insert(parent);
    t.entries_.emplace(std::move(child), std::move(parent));
  }
  const auto cycle = find_cycle(t.nodes_, t.parents_);
  if (!cycle.empty()) {
    std::string text;
    for (size_t i = 0; i < cycle.size(); ++i) {
      if (i > 0) text += " -> ";
      text += cycle[i].str();
    }
    throw Error(ErrorCode::kCycleDetected, "cycle: " + text);
  }
  for (const auto& n : t.nodes_) {
    if (children.count(n) == 0) t.roots_.insert(n);
  }
  // Depths by relaxation from the roots downwards (Kahn order over the
  // reversed edges keeps this linear).
  std::map<ConceptId, std::vector<ConceptId>> kids;
  std::map<ConceptId, size_t> pending;
  for (const auto& [child, parent] : t.entries_) {
    kids[parent].push_back(child);
    ++pending[child];
  }
  std::deque<ConceptId> queue(t.roots_.begin(), t.roots_.end());
  for (const auto& r : t.roots_) t.depth_[r] = 1;
  while (!queue.empty()) {
    const ConceptId n = queue.front();
    queue.pop_front();
    for (const auto& k : kids[n]) {
      const int candidate = t.depth_[n] + 1;
      auto [it, inserted] = t.depth_.emplace(k, candidate);
      if (!inserted) it->second = std::min(it->second, candidate);
      if (--pending[k] == 0) queue.push_back(k);
    }
  }
  return t;
}

const std::set<ConceptId>& Taxonomy::parents(const ConceptId& c) const {
  static const std::set<ConceptId> kNone;
  const auto it = parents_.find(c);
  return it == parents_.end() ? kNone : it->second;
}

int Taxonomy::depth(const ConceptId& c) const {
  const auto it = depth_.find(c);
  if (it == depth_.end()) {
    throw Error(ErrorCode::kUnknownConcept,
                "'" + c.str() + "' is not in the taxonomy");
  }
  return it->second;
}

std::set<ConceptId> Taxonomy::ancestors(const ConceptId& c) const {
  if (!contains(c)) {
    throw Error(ErrorCode::kUnknownConcept,
                "'" + c.str() + "' is not in the taxonomy");
  }
  std::set<ConceptId> seen = {c};
  std::vector<ConceptId> stack = {c};
  while (!stack.empty()) {
    const ConceptId n = stack.back();
    stack.pop_back();
    for (const auto& p : parents(n)) {
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  return seen;
}

Taxonomy parse_taxonomy(std::istream& in) {
  std::vector<Taxonomy::Entry> entries;
  for_each_record(in, [&](size_t line, std::string_view record) {
    const auto fields = split(record, '\t');
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "taxonomy expects child<TAB>parent at line " +
                      std::to_string(line));
    }
    try {
      entries.emplace_back(normalize_concept(fields[0]),
                           normalize_concept(fields[1]));
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedLine,
                  e.what() + std::string(" at line ") + std::to_string(line));
    }
  });
  return Taxonomy::from_entries(std::move(entries));
}

std::vector<SourceEdge> taxonomy_edges(const Taxonomy& t,
                                       const std::string& relation,
                                       double weight) {
  std::vector<SourceEdge> out;
  out.reserve(t.entries().size());
  for (const auto& [child, parent] : t.entries()) {
    out.push_back(SourceEdge{child, parent,
                             {relation, RelationCategory::kLexicographic},
                             weight});
  }
  return out;
}

}  // namespace kgzsl::kg
