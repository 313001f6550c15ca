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

#ifndef KGZSL_GNN_FEATURES_H_
#define KGZSL_GNN_FEATURES_H_

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "kgzsl/kg/concept.h"
#include "kgzsl/kg/graph.h"
#include "kgzsl/numerics/matrix.h"
#include "kgzsl/numerics/random.h"

namespace kgzsl::gnn {

// Concept-keyed vectors: one `concept v1 ... vd` record per line.
using ConceptVectors = std::map<kg::ConceptId, std::vector<double>>;

// Throws kMalformedLine, kNonFiniteInput, or kDimMismatch when records
// disagree on width. Repeated concepts are an error.
ConceptVectors read_concept_vectors(std::istream& in);
void write_concept_vectors(std::ostream& out, const ConceptVectors& vectors);

struct NodeFeatures {
  numerics::Matrix matrix;           // num_nodes x dim
  std::vector<std::string> missing;  // nodes filled by the fallback
};

// Glorot-initialized features, one row per node.
numerics::Matrix seeded_node_features(size_t num_nodes, size_t dim,
                                      numerics::Rng& rng);

// Rows for concepts present in `vectors`; the rest come from
// seeded_node_features(). Throws kDimMismatch if `vectors` is not `dim`
// wide.
NodeFeatures assemble_node_features(const kg::KnowledgeGraph& g,
                                    const ConceptVectors& vectors, size_t dim,
                                    numerics::Rng& rng);

}  // namespace kgzsl::gnn

#endif  // KGZSL_GNN_FEATURES_H_
