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

#ifndef KGZSL_GNN_GRAPH_VIEW_H_
#define KGZSL_GNN_GRAPH_VIEW_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kgzsl/kg/graph.h"
#include "kgzsl/numerics/tape.h"

namespace kgzsl::gnn {

// Index-only view of a knowledge graph, as consumed by the layers.
struct GraphView {
  struct Arc {
    size_t src = 0;
    size_t dst = 0;
    size_t relation = 0;
  };

  size_t num_nodes = 0;
  size_t num_relations = 0;
  std::vector<Arc> arcs;  // stored orientation, no duplicates
  // Undirected neighbor sets, sorted, self excluded.
  std::vector<std::vector<size_t>> neighbors;

  // Throws kShapeMismatch on out-of-range indices.
  static GraphView from_arcs(size_t num_nodes, size_t num_relations,
                             std::vector<Arc> arcs);
  static GraphView from_graph(const kg::KnowledgeGraph& g);

  // Relation channels seen by R-GCN: relation r and its inverse r + R.
  size_t num_channels() const { return 2 * num_relations; }
};

// D^-1/2 (A + I) D^-1/2 over the undirected binary adjacency.
numerics::ad::SparseMatrix normalize_adjacency(const GraphView& g);

// One matrix per channel; row i holds 1/|N_c(i)| for each j in N_c(i).
// Channel r carries src -> dst messages, channel r + R the reverse.
std::vector<numerics::ad::SparseMatrix> channel_mean_operators(
    const GraphView& g);

// Seeded neighbor order for the recurrent aggregator: for every node, a
// permutation of its neighbor list that depends only on (seed, node).
std::vector<std::vector<size_t>> neighbor_orders(const GraphView& g,
                                                 uint64_t seed);

}  // namespace kgzsl::gnn

#endif  // KGZSL_GNN_GRAPH_VIEW_H_
