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

#include "kgzsl/gnn/layers.h"

#include <algorithm>

#include "kgzsl/common/error.h"

namespace kgzsl::gnn {

namespace ad = numerics::ad;

Var gcn_layer(const SparseMatrix& adjacency, Var h, Var w) {
  return ad::spmm(adjacency, ad::matmul(h, w));
}

std::vector<Var> rgcn_basis_weights(Var coeffs, std::span<const Var> bases) {
  std::vector<Var> out;
  out.reserve(coeffs.rows());
  for (size_t c = 0; c < coeffs.rows(); ++c) {
    out.push_back(ad::linear_combination(coeffs, c, bases));
  }
  return out;
}

Var rgcn_layer(std::span<const SparseMatrix> channel_ops, Var h,
               const RgcnWeights& w) {
  check_shape(channel_ops.size() == w.channels.size(),
              "rgcn: channel operator count differs from weight count");
  Var acc = ad::matmul(h, w.self);
  for (size_t c = 0; c < channel_ops.size(); ++c) {
    if (channel_ops[c].entries.empty()) continue;
    acc = ad::add(acc, ad::spmm(channel_ops[c], ad::matmul(h, w.channels[c])));
  }
  return acc;
}

Var lstm_aggregate(const std::vector<std::vector<size_t>>& orders, Var h,
                   const LstmWeights& w) {
  ad::Tape& tape = *h.tape;
  const size_t n = h.rows();
  const size_t k = w.recurrent.rows();
  check_shape(orders.size() == n, "lstm: neighbor orders do not match nodes");
  check_shape(w.input.rows() == h.cols() && w.input.cols() == 4 * k &&
                  w.recurrent.cols() == 4 * k && w.bias.rows() == 1 &&
                  w.bias.cols() == 4 * k,
              "lstm: cell weight shapes are inconsistent");
  Var hidden = tape.constant(numerics::Matrix(n, k));
  Var cell = tape.constant(numerics::Matrix(n, k));
  size_t steps = 0;
  for (const auto& o : orders) steps = std::max(steps, o.size());
  for (size_t t = 0; t < steps; ++t) {
    std::vector<size_t> active;
    std::vector<size_t> inputs;
    for (size_t i = 0; i < n; ++i) {
      if (orders[i].size() > t) {
        active.push_back(i);
        inputs.push_back(orders[i][t]);
      }
    }
    const Var x = ad::gather_rows(h, inputs);
    const Var h_prev = ad::gather_rows(hidden, active);
    const Var c_prev = ad::gather_rows(cell, active);
    const Var gates = ad::add_row_broadcast(
        ad::add(ad::matmul(x, w.input), ad::matmul(h_prev, w.recurrent)),
        w.bias);
    const Var in_gate = ad::sigmoid(ad::slice_cols(gates, 0, k));
    const Var forget = ad::sigmoid(ad::slice_cols(gates, k, 2 * k));
    const Var candidate = ad::tanh(ad::slice_cols(gates, 2 * k, 3 * k));
    const Var out_gate = ad::sigmoid(ad::slice_cols(gates, 3 * k, 4 * k));
    const Var c_next = ad::add(ad::hadamard(forget, c_prev),
                               ad::hadamard(in_gate, candidate));
    const Var h_next = ad::hadamard(out_gate, ad::tanh(c_next));
    hidden = ad::scatter_rows(hidden, active, h_next);
    cell = ad::scatter_rows(cell, active, c_next);
  }
  return hidden;
}

Var lstm_layer(const std::vector<std::vector<size_t>>& orders, Var h,
               const LstmWeights& w) {
  return ad::matmul(ad::concat_cols(h, lstm_aggregate(orders, h, w)), w.out);
}

Segments attention_segments(const GraphView& g) {
  Segments s;
  s.offsets.reserve(g.num_nodes + 1);
  s.offsets.push_back(0);
  for (size_t i = 0; i < g.num_nodes; ++i) {
    s.members.push_back(i);
    s.members.insert(s.members.end(), g.neighbors[i].begin(),
                     g.neighbors[i].end());
    s.offsets.push_back(s.members.size());
  }
  return s;
}

Var trgcn_layer(const Segments& segments, Var h, const TrGcnWeights& w) {
  check_shape(segments.offsets.size() == h.rows() + 1,
              "trgcn: segments do not match nodes");
  const Var hidden = ad::leaky_relu(
      ad::add_row_broadcast(ad::matmul(h, w.w1), w.b1), w.leaky_alpha);
  const Var projected =
      ad::add_row_broadcast(ad::matmul(hidden, w.w2), w.b2);
  const Var set = ad::gather_rows(projected, segments.members);
  const Var attended =
      ad::segment_attention(ad::matmul(set, w.query), ad::matmul(set, w.key),
                            ad::matmul(set, w.value), segments.offsets);
  const Var pooled = ad::segment_mean(attended, segments.offsets);
  return ad::matmul(ad::concat_cols(h, pooled), w.out);
}

}  // namespace kgzsl::gnn
