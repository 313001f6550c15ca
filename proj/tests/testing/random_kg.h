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

#ifndef KGZSL_TESTS_TESTING_RANDOM_KG_H_
#define KGZSL_TESTS_TESTING_RANDOM_KG_H_

#include <set>
#include <string>
#include <vector>

#include "kgzsl/kg/source.h"
#include "kgzsl/kg/taxonomy.h"
#include "kgzsl/numerics/random.h"

namespace kgzsl::testing {

inline kg::ConceptId node_name(size_t i) {
  return kg::ConceptId("n" + std::to_string(i));
}

// Random DAG on `n` nodes: node i may pick parents among nodes < i.
inline std::vector<kg::Taxonomy::Entry> random_taxonomy_entries(
    size_t n, numerics::Rng& rng) {
  std::vector<kg::Taxonomy::Entry> entries;
  for (size_t i = 1; i < n; ++i) {
    if (rng.uniform() < 0.1) continue;  // another root
    const size_t parents = 1 + (rng.uniform() < 0.3 ? 1 : 0);
    for (size_t k = 0; k < parents; ++k) {
      entries.emplace_back(node_name(i), node_name(rng.uniform_index(i)));
    }
  }
  return entries;
}

inline std::vector<kg::SourceEdge> random_edges(size_t nodes, size_t count,
                                                size_t relations,
                                                numerics::Rng& rng) {
  std::vector<kg::SourceEdge> edges;
  std::set<std::tuple<size_t, size_t, std::string>> seen;
  while (edges.size() < count) {
    const size_t a = rng.uniform_index(nodes);
    const size_t b = rng.uniform_index(nodes);
    if (a == b) continue;
    const std::string rel = "R" + std::to_string(rng.uniform_index(relations));
    const double w = static_cast<double>(rng.uniform_index(8)) * 0.5;
    if (!seen.emplace(a, b, rel).second) continue;
    edges.push_back({node_name(a), node_name(b),
                     {rel, kg::RelationCategory::kCommonSense}, w});
  }
  return edges;
}

}  // namespace kgzsl::testing

#endif  // KGZSL_TESTS_TESTING_RANDOM_KG_H_
