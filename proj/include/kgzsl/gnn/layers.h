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

#ifndef KGZSL_GNN_LAYERS_H_
#define KGZSL_GNN_LAYERS_H_

#include <span>
#include <vector>

#include "kgzsl/gnn/graph_view.h"
#include "kgzsl/numerics/tape.h"

// Single propagation layers. Each returns the pre-activation output; the
// model applies the nonlinearity.
namespace kgzsl::gnn {

using numerics::ad::SparseMatrix;
using numerics::ad::Var;

// Â H W
Var gcn_layer(const SparseMatrix& adjacency, Var h, Var w);

struct RgcnWeights {
  Var self;
  std::vector<Var> channels;  // one per channel, see channel_mean_operators
};

// W_c = sum_b coeffs(c, b) V_b for every channel c.
std::vector<Var> rgcn_basis_weights(Var coeffs, std::span<const Var> bases);

// H W_0 + sum_c S_c H W_c
Var rgcn_layer(std::span<const SparseMatrix> channel_ops, Var h,
               const RgcnWeights& w);

struct LstmWeights {
  Var input;      // d_in x 4k, gate blocks ordered i, f, g, o
  Var recurrent;  // k x 4k
  Var bias;       // 1 x 4k
  Var out;        // (d_in + k) x d_out
};

// Final hidden state of the cell run over each node's ordered neighbors;
// zero for isolated nodes.
Var lstm_aggregate(const std::vector<std::vector<size_t>>& orders, Var h,
                   const LstmWeights& w);
// [H | aggregate] W_out
Var lstm_layer(const std::vector<std::vector<size_t>>& orders, Var h,
               const LstmWeights& w);

struct TrGcnWeights {
  Var w1, b1, w2, b2;          // projection MLP
  Var query, key, value;       // p x p
  Var out;                     // (d_in + p) x d_out
  double leaky_alpha = 0.2;    // hidden activation of the MLP
};

// Node i attends over {i} followed by its neighbors.
struct Segments {
  std::vector<size_t> members;
  std::vector<size_t> offsets;  // num_nodes + 1 entries
};
Segments attention_segments(const GraphView& g);

// Per node: project the set, self-attend, mean-pool, then
// [H | pooled] W_out.
Var trgcn_layer(const Segments& segments, Var h, const TrGcnWeights& w);

}  // namespace kgzsl::gnn

#endif  // KGZSL_GNN_LAYERS_H_
