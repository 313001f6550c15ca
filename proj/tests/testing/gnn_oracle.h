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

#ifndef KGZSL_TESTS_TESTING_GNN_ORACLE_H_
#define KGZSL_TESTS_TESTING_GNN_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "kgzsl/gnn/graph_view.h"
#include "kgzsl/gnn/model.h"
#include "kgzsl/numerics/matrix.h"
#include "kgzsl/numerics/random.h"

// Per-node reference implementations of the propagation rules, written with
// plain loops and no library kernels.
namespace kgzsl::testing {

using Vec = std::vector<double>;
using numerics::Matrix;

struct RandomGraph {
  size_t nodes = 0;
  size_t relations = 0;
  std::vector<gnn::GraphView::Arc> arcs;

  gnn::GraphView view() const {
    return gnn::GraphView::from_arcs(nodes, relations, arcs);
  }
};

inline RandomGraph random_graph(numerics::Rng& rng, size_t max_nodes = 10,
                                size_t max_relations = 3) {
  RandomGraph g;
  g.nodes = 1 + rng.uniform_index(max_nodes);
  g.relations = 1 + rng.uniform_index(max_relations);
  const size_t attempts = rng.uniform_index(2 * g.nodes + 1);
  std::set<std::tuple<size_t, size_t, size_t>> seen;
  for (size_t k = 0; k < attempts && g.nodes > 1; ++k) {
    const size_t a = rng.uniform_index(g.nodes);
    const size_t b = rng.uniform_index(g.nodes);
    const size_t r = rng.uniform_index(g.relations);
    if (a == b || !seen.emplace(a, b, r).second) continue;
    g.arcs.push_back({a, b, r});
  }
  return g;
}

inline Vec row_of(const Matrix& m, size_t i) {
  Vec v(m.cols());
  for (size_t j = 0; j < m.cols(); ++j) v[j] = m(i, j);
  return v;
}

inline Vec vec_mat(const Vec& x, const Matrix& w) {
  Vec out(w.cols(), 0.0);
  for (size_t k = 0; k < w.rows(); ++k)
    for (size_t j = 0; j < w.cols(); ++j) out[j] += x[k] * w(k, j);
  return out;
}

inline void axpy(double a, const Vec& x, Vec& y) {
  for (size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline std::vector<std::set<size_t>> undirected(const RandomGraph& g) {
  std::vector<std::set<size_t>> adj(g.nodes);
  for (const auto& a : g.arcs) {
    adj[a.src].insert(a.dst);
    adj[a.dst].insert(a.src);
  }
  return adj;
}

inline Matrix gcn_oracle(const RandomGraph& g, const Matrix& h,
                         const Matrix& w) {
  const auto adj = undirected(g);
  Matrix out(g.nodes, w.cols());
  for (size_t i = 0; i < g.nodes; ++i) {
    std::set<size_t> closed = adj[i];
    closed.insert(i);
    Vec acc(w.cols(), 0.0);
    for (size_t j : closed) {
      const double c = 1.0 / std::sqrt(static_cast<double>(
                                 (adj[i].size() + 1) * (adj[j].size() + 1)));
      axpy(c, vec_mat(row_of(h, j), w), acc);
    }
    for (size_t k = 0; k < acc.size(); ++k) out(i, k) = acc[k];
  }
  return out;
}

// channel_weights[c] for c in [0, 2R).
inline Matrix rgcn_oracle(const RandomGraph& g, const Matrix& h,
                          const Matrix& self,
                          const std::vector<Matrix>& channel_weights) {
  const size_t R = g.relations;
  Matrix out(g.nodes, self.cols());
  for (size_t i = 0; i < g.nodes; ++i) {
    Vec acc = vec_mat(row_of(h, i), self);
    for (size_t c = 0; c < 2 * R; ++c) {
      std::vector<size_t> from;
      for (const auto& a : g.arcs) {
        if (c < R && a.relation == c && a.dst == i) from.push_back(a.src);
        if (c >= R && a.relation + R == c && a.src == i) from.push_back(a.dst);
      }
      for (size_t j : from) {
        axpy(1.0 / static_cast<double>(from.size()),
             vec_mat(row_of(h, j), channel_weights[c]), acc);
      }
    }
    for (size_t k = 0; k < acc.size(); ++k) out(i, k) = acc[k];
  }
  return out;
}

inline Matrix lstm_oracle(const std::vector<std::vector<size_t>>& orders,
                          const Matrix& h, const Matrix& wx, const Matrix& wh,
                          const Matrix& b, const Matrix& wout) {
  const size_t k = wh.rows();
  Matrix out(h.rows(), wout.cols());
  for (size_t i = 0; i < h.rows(); ++i) {
    Vec hid(k, 0.0), cell(k, 0.0);
    for (size_t j : orders[i]) {
      const Vec gx = vec_mat(row_of(h, j), wx);
      const Vec gh = vec_mat(hid, wh);
      for (size_t u = 0; u < k; ++u) {
        const double ig = sigmoid(gx[u] + gh[u] + b(0, u));
        const double fg = sigmoid(gx[k + u] + gh[k + u] + b(0, k + u));
        const double cg = std::tanh(gx[2 * k + u] + gh[2 * k + u] + b(0, 2 * k + u));
        const double og = sigmoid(gx[3 * k + u] + gh[3 * k + u] + b(0, 3 * k + u));
        cell[u] = fg * cell[u] + ig * cg;
        hid[u] = og * std::tanh(cell[u]);
      }
    }
    const Vec o = vec_mat(concat(row_of(h, i), hid), wout);
    for (size_t c = 0; c < o.size(); ++c) out(i, c) = o[c];
  }
  return out;
}

struct TrGcnParams {
  Matrix w1, b1, w2, b2, q, k, v, out;
  double alpha = 0.2;
};

inline Matrix trgcn_oracle(const RandomGraph& g, const Matrix& h,
                           const TrGcnParams& p) {
  const auto adj = undirected(g);
  const size_t dim = p.q.cols();
  auto project = [&](size_t j) {
    Vec z = vec_mat(row_of(h, j), p.w1);
    for (size_t u = 0; u < z.size(); ++u) {
      z[u] += p.b1(0, u);
      if (z[u] < 0) z[u] *= p.alpha;
    }
    Vec y = vec_mat(z, p.w2);
    for (size_t u = 0; u < y.size(); ++u) y[u] += p.b2(0, u);
    return y;
  };
  Matrix out(g.nodes, p.out.cols());
  for (size_t i = 0; i < g.nodes; ++i) {
    std::vector<size_t> set{i};
    set.insert(set.end(), adj[i].begin(), adj[i].end());
    std::vector<Vec> qs, ks, vs;
    for (size_t j : set) {
      const Vec y = project(j);
      qs.push_back(vec_mat(y, p.q));
      ks.push_back(vec_mat(y, p.k));
      vs.push_back(vec_mat(y, p.v));
    }
    Vec pooled(dim, 0.0);
    for (size_t a = 0; a < set.size(); ++a) {
      std::vector<double> s(set.size());
      double top = -1e300;
      for (size_t b = 0; b < set.size(); ++b) {
        double d = 0.0;
        for (size_t u = 0; u < dim; ++u) d += qs[a][u] * ks[b][u];
        s[b] = d / std::sqrt(static_cast<double>(dim));
        top = std::max(top, s[b]);
      }
      double z = 0.0;
      for (double& x : s) z += (x = std::exp(x - top));
      for (size_t b = 0; b < set.size(); ++b) {
        axpy(s[b] / z / static_cast<double>(set.size()), vs[b], pooled);
      }
    }
    const Vec o = vec_mat(concat(row_of(h, i), pooled), p.out);
    for (size_t c = 0; c < o.size(); ++c) out(i, c) = o[c];
  }
  return out;
}

// Whole-model reference forward for any architecture.
inline Matrix model_oracle(const gnn::GnnModel& model, const RandomGraph& g,
                           const Matrix& features) {
  const auto& cfg = model.config();
  const auto& ps = model.parameters();
  size_t cursor = 0;
  auto next = [&]() -> const Matrix& { return ps[cursor++].value; };
  const auto orders =
      gnn::neighbor_orders(g.view(), cfg.order_seed);  // order only
  Matrix h = features;
  for (size_t l = 0; l < cfg.num_layers(); ++l) {
    Matrix out;
    switch (cfg.architecture) {
      case gnn::Architecture::kGcn:
        out = gcn_oracle(g, h, next());
        break;
      case gnn::Architecture::kRgcn: {
        const Matrix& self = next();
        std::vector<Matrix> weights;
        const size_t channels = 2 * g.relations;
        if (model.uses_bases()) {
          std::vector<Matrix> bases;
          for (size_t b = 0; b < model.num_bases(); ++b) bases.push_back(next());
          const Matrix& a = next();
          for (size_t c = 0; c < channels; ++c) {
            Matrix w(self.rows(), self.cols());
            for (size_t b = 0; b < bases.size(); ++b)
              for (size_t r = 0; r < w.rows(); ++r)
                for (size_t k = 0; k < w.cols(); ++k)
                  w(r, k) += a(c, b) * bases[b](r, k);
            weights.push_back(w);
          }
        } else {
          for (size_t c = 0; c < channels; ++c) weights.push_back(next());
        }
        out = rgcn_oracle(g, h, self, weights);
        break;
      }
      case gnn::Architecture::kLstm: {
        const Matrix& wx = next();
        const Matrix& wh = next();
        const Matrix& b = next();
        const Matrix& wo = next();
        out = lstm_oracle(orders, h, wx, wh, b, wo);
        break;
      }
      case gnn::Architecture::kTrGcn: {
        TrGcnParams p;
        p.w1 = next();
        p.b1 = next();
        p.w2 = next();
        p.b2 = next();
        p.q = next();
        p.k = next();
        p.v = next();
        p.out = next();
        p.alpha = cfg.leaky_alpha;
        out = trgcn_oracle(g, h, p);
        break;
      }
    }
    const bool last = l + 1 == cfg.num_layers();
    if (!last || cfg.final_activation) {
      for (double& x : out.values()) {
        if (x < 0) x *= cfg.leaky_alpha;
      }
    }
    h = out;
  }
  if (cfg.normalize_output) {
    for (size_t i = 0; i < h.rows(); ++i) {
      double n = 0.0;
      for (size_t k = 0; k < h.cols(); ++k) n += h(i, k) * h(i, k);
      n = std::sqrt(n);
      if (n == 0.0) continue;
      for (size_t k = 0; k < h.cols(); ++k) h(i, k) /= n;
    }
  }
  return h;
}

// Random model whose biases are nonzero too, so oracles exercise them.
inline gnn::GnnModel random_model(gnn::Architecture arch,
                                  std::vector<size_t> dims, size_t relations,
                                  numerics::Rng& rng, size_t num_bases = 0) {
  gnn::GnnConfig cfg;
  cfg.architecture = arch;
  cfg.layer_dims = std::move(dims);
  cfg.num_bases = num_bases;
  auto model = gnn::GnnModel::init(cfg, relations, rng);
  for (auto& p : model.parameters()) {
    for (double& x : p.value.values()) x = rng.uniform(-1.0, 1.0);
  }
  return model;
}

}  // namespace kgzsl::testing

#endif  // KGZSL_TESTS_TESTING_GNN_ORACLE_H_
