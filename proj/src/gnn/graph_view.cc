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

#include "kgzsl/gnn/graph_view.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <tuple>

#include "kgzsl/common/error.h"
#include "kgzsl/numerics/random.h"

namespace kgzsl::gnn {

using numerics::ad::SparseMatrix;

GraphView GraphView::from_arcs(size_t num_nodes, size_t num_relations,
                               std::vector<Arc> arcs) {
  GraphView g;
  g.num_nodes = num_nodes;
  g.num_relations = num_relations;
  std::set<std::tuple<size_t, size_t, size_t>> seen;
  std::vector<std::set<size_t>> adj(num_nodes);
  for (const auto& a : arcs) {
    check_shape(a.src < num_nodes && a.dst < num_nodes &&
                    a.relation < num_relations,
                "graph arc references a missing node or relation");
    if (!seen.emplace(a.src, a.dst, a.relation).second) continue;
    g.arcs.push_back(a);
    if (a.src != a.dst) {
      adj[a.src].insert(a.dst);
      adj[a.dst].insert(a.src);
    }
  }
  g.neighbors.reserve(num_nodes);
  for (const auto& s : adj) g.neighbors.emplace_back(s.begin(), s.end());
  return g;
}

GraphView GraphView::from_graph(const kg::KnowledgeGraph& g) {
  std::vector<Arc> arcs;
  arcs.reserve(g.edges().size());
  for (const auto& e : g.edges()) arcs.push_back({e.src, e.dst, e.relation});
  return from_arcs(g.num_nodes(), g.relations().size(), std::move(arcs));
}

SparseMatrix normalize_adjacency(const GraphView& g) {
  std::vector<double> inv_sqrt(g.num_nodes);
  for (size_t i = 0; i < g.num_nodes; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.neighbors[i].size() + 1));
  }
  SparseMatrix s{g.num_nodes, g.num_nodes, {}};
  for (size_t i = 0; i < g.num_nodes; ++i) {
    bool self_done = false;
    for (size_t j : g.neighbors[i]) {
      if (!self_done && j > i) {
        s.entries.push_back({i, i, inv_sqrt[i] * inv_sqrt[i]});
        self_done = true;
      }
      s.entries.push_back({i, j, inv_sqrt[i] * inv_sqrt[j]});
    }
    if (!self_done) s.entries.push_back({i, i, inv_sqrt[i] * inv_sqrt[i]});
  }
  return s;
}

std::vector<SparseMatrix> channel_mean_operators(const GraphView& g) {
  const size_t channels = g.num_channels();
  // incoming[c][i] = sources of messages into i on channel c
  std::vector<std::vector<std::vector<size_t>>> incoming(
      channels, std::vector<std::vector<size_t>>(g.num_nodes));
  for (const auto& a : g.arcs) {
    incoming[a.relation][a.dst].push_back(a.src);
    incoming[a.relation + g.num_relations][a.src].push_back(a.dst);
  }
  std::vector<SparseMatrix> ops;
  ops.reserve(channels);
  for (size_t c = 0; c < channels; ++c) {
    SparseMatrix s{g.num_nodes, g.num_nodes, {}};
    for (size_t i = 0; i < g.num_nodes; ++i) {
      auto& from = incoming[c][i];
      std::sort(from.begin(), from.end());
      const double w = 1.0 / static_cast<double>(std::max<size_t>(from.size(), 1));
      for (size_t j : from) s.entries.push_back({i, j, w});
    }
    ops.push_back(std::move(s));
  }
  return ops;
}

std::vector<std::vector<size_t>> neighbor_orders(const GraphView& g,
                                                 uint64_t seed) {
  std::vector<std::vector<size_t>> orders = g.neighbors;
  for (size_t i = 0; i < orders.size(); ++i) {
    numerics::Rng rng(numerics::Rng::derive_seed(seed, i));
    rng.shuffle(std::span<size_t>(orders[i]));
  }
  return orders;
}

}  // namespace kgzsl::gnn
