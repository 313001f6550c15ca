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

#ifndef KGZSL_TRAINER_BASELINES_H_
#define KGZSL_TRAINER_BASELINES_H_

#include <cstdint>
#include <map>
#include <vector>

#include "kgzsl/kg/graph.h"
#include "kgzsl/trainer/embedding_table.h"

namespace kgzsl::trainer {

// Seeded Gaussian rows, unit-normalized.
EmbeddingTable random_table(const std::vector<kg::ConceptId>& classes,
                            size_t dim, uint64_t seed);

// Each class takes the row of its mapped concept from `source`. Classes
// missing from the mapping keep their own row. Throws kMissingMappingTarget
// when a target (or an unmapped class) has no row in `source`.
EmbeddingTable unrelated_table(
    const EmbeddingTable& source, const std::vector<kg::ConceptId>& classes,
    const std::map<kg::ConceptId, kg::ConceptId>& mapping);

// Assigns each seed class a distinct non-seed node, preferring the largest
// hop distance, picked with a seeded draw. Throws kMissingMappingTarget when
// the graph has fewer non-seed nodes than seeds.
std::map<kg::ConceptId, kg::ConceptId> choose_unrelated_mapping(
    const kg::KnowledgeGraph& g, uint64_t seed);

}  // namespace kgzsl::trainer

#endif  // KGZSL_TRAINER_BASELINES_H_
