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

#ifndef KGZSL_TESTS_TESTING_WUP_ORACLE_H_
#define KGZSL_TESTS_TESTING_WUP_ORACLE_H_

#include <algorithm>
#include <set>
#include <vector>

#include "kgzsl/kg/taxonomy.h"

namespace kgzsl::testing {

using kg::ConceptId;
using kg::Taxonomy;

// Independent evaluation: reachability by transitive closure over an
// adjacency matrix, depths by relaxation to a fixed point.
struct WupOracle {
  explicit WupOracle(const std::vector<Taxonomy::Entry>& entries) {
    std::set<ConceptId> names;
    for (const auto& [c, p] : entries) {
      names.insert(c);
      names.insert(p);
    }
    nodes.assign(names.begin(), names.end());
    const size_t n = nodes.size();
    auto id = [&](const ConceptId& c) {
      return static_cast<size_t>(
          std::lower_bound(nodes.begin(), nodes.end(), c) - nodes.begin());
    };
    reach.assign(n, std::vector<bool>(n, false));
    std::vector<std::vector<size_t>> parents(n);
    for (size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& [c, p] : entries) {
      reach[id(c)][id(p)] = true;
      parents[id(c)].push_back(id(p));
    }
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    const int inf = 1 << 20;
    depth.assign(n, inf);
    for (size_t i = 0; i < n; ++i) {
      if (parents[i].empty()) depth[i] = 1;
    }
    for (size_t round = 0; round < n; ++round) {
      for (size_t i = 0; i < n; ++i) {
        for (size_t p : parents[i]) depth[i] = std::min(depth[i], depth[p] + 1);
      }
    }
  }

  // Negative when the two nodes share no ancestor.
  double operator()(size_t a, size_t b) const {
    int best = 0;
    for (size_t z = 0; z < nodes.size(); ++z) {
      if (reach[a][z] && reach[b][z]) best = std::max(best, depth[z]);
    }
    if (best == 0) return -1.0;
    return std::min(1.0, 2.0 * best / (depth[a] + depth[b]));
  }

  std::vector<ConceptId> nodes;
  std::vector<std::vector<bool>> reach;
  std::vector<int> depth;
};

}  // namespace kgzsl::testing

#endif  // KGZSL_TESTS_TESTING_WUP_ORACLE_H_
