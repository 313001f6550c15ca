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

#include "kgzsl/trainer/baselines.h"

#include <algorithm>

#include "kgzsl/common/error.h"
#include "kgzsl/numerics/random.h"

namespace kgzsl::trainer {

using numerics::Matrix;

EmbeddingTable random_table(const std::vector<kg::ConceptId>& classes,
                            size_t dim, uint64_t seed) {
  std::vector<kg::ConceptId> names = classes;
  std::sort(names.begin(), names.end());
  numerics::Rng rng(seed);
  Matrix m = numerics::row_l2_normalize(
      numerics::gaussian_matrix(names.size(), dim, 1.0, rng));
  nlohmann::json provenance;
  provenance["kind"] = "random";
  provenance["seed"] = seed;
  return EmbeddingTable(std::move(names), std::move(m), std::move(provenance));
}

EmbeddingTable unrelated_table(
    const EmbeddingTable& source, const std::vector<kg::ConceptId>& classes,
    const std::map<kg::ConceptId, kg::ConceptId>& mapping) {
  Matrix m(classes.size(), source.dim());
  nlohmann::json map_record = nlohmann::json::object();
  for (size_t k = 0; k < classes.size(); ++k) {
    const auto it = mapping.find(classes[k]);
    const kg::ConceptId& target = it == mapping.end() ? classes[k] : it->second;
    const auto row = source.find(target);
    if (!row) {
      throw Error(ErrorCode::kMissingMappingTarget,
                  "no trained embedding for mapping target '" + target.str() +
                      "'");
    }
    const auto src = source.vectors().row(*row);
    std::copy(src.begin(), src.end(), m.row(k).begin());
    map_record[classes[k].str()] = target.str();
  }
  nlohmann::json provenance = source.provenance();
  provenance["kind"] = "unrelated";
  provenance["mapping"] = std::move(map_record);
  return EmbeddingTable(classes, std::move(m), std::move(provenance));
}

std::map<kg::ConceptId, kg::ConceptId> choose_unrelated_mapping(
    const kg::KnowledgeGraph& g, uint64_t seed) {
  // Candidates ordered farthest first; ties by canonical node order.
  std::vector<size_t> pool;
  for (size_t i = 0; i < g.num_nodes(); ++i) {
    if (g.nodes()[i].seed == kg::SeedLabel::kNone) pool.push_back(i);
  }
  std::stable_sort(pool.begin(), pool.end(), [&](size_t a, size_t b) {
    return g.nodes()[a].hop > g.nodes()[b].hop;
  });
  const auto seeds = g.seeds();
  if (pool.size() < seeds.size()) {
    throw Error(ErrorCode::kMissingMappingTarget,
                "graph has " + std::to_string(pool.size()) +
                    " non-seed nodes for " + std::to_string(seeds.size()) +
                    " classes");
  }
  // Shuffle within the farthest |seeds| (or the whole max-hop tier if wider).
  size_t take = seeds.size();
  if (!pool.empty()) {
    const int top = g.nodes()[pool.front()].hop;
    size_t tier = 0;
    while (tier < pool.size() && g.nodes()[pool[tier]].hop == top) ++tier;
    take = std::max(take, tier);
  }
  std::vector<size_t> candidates(pool.begin(),
                                 pool.begin() + static_cast<long>(take));
  numerics::Rng rng(seed);
  rng.shuffle(std::span<size_t>(candidates));
  std::map<kg::ConceptId, kg::ConceptId> mapping;
  for (size_t k = 0; k < seeds.size(); ++k) {
    mapping.emplace(g.nodes()[seeds[k]].name, g.nodes()[candidates[k]].name);
  }
  return mapping;
}

}  // namespace kgzsl::trainer
