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

#include "kgzsl/numerics/tape.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgzsl/common/error.h"

namespace kgzsl::numerics::ad {

const Matrix& Var::value() const { return tape->value(*this); }

Matrix SparseMatrix::to_dense() const {
  Matrix out(rows, cols);
  for (const auto& e : entries) out(e.row, e.col) += e.value;
  return out;
}

Matrix SparseMatrix::multiply(const Matrix& dense) const {
  check_shape(dense.rows() == cols, "spmm: sparse cols != dense rows");
  Matrix out(rows, dense.cols());
  for (const auto& e : entries) {
    auto o = out.row(e.row);
    const auto d = dense.row(e.col);
    for (size_t j = 0; j < o.size(); ++j) o[j] += e.value * d[j];
  }
  return out;
}

Matrix SparseMatrix::multiply_transposed(const Matrix& dense) const {
  check_shape(dense.rows() == rows, "spmm^T: sparse rows != dense rows");
  Matrix out(cols, dense.cols());
  for (const auto& e : entries) {
    auto o = out.row(e.col);
    const auto d = dense.row(e.row);
    for (size_t j = 0; j < o.size(); ++j) o[j] += e.value * d[j];
  }
  return out;
}

Var Tape::constant(Matrix value) {
  if (!value.all_finite()) {
    throw Error(ErrorCode::kNonFiniteInput, "constant has non-finite entries");
  }
  nodes_.push_back(Node{std::move(value), {}, false, {}});
  return Var{this, nodes_.size() - 1};
}

Var Tape::variable(Matrix value) {
  if (!value.all_finite()) {
    throw Error(ErrorCode::kNonFiniteInput, "variable has non-finite entries");
  }
  nodes_.push_back(Node{std::move(value), {}, true, {}});
  return Var{this, nodes_.size() - 1};
}

void Tape::check_owned(Var v) const {
  if (v.tape != this || v.id >= nodes_.size()) {
    throw Error(ErrorCode::kUntrackedParameter,
                "variable does not belong to this tape");
  }
}

const Matrix& Tape::value(Var v) const {
  check_owned(v);
  return nodes_[v.id].value;
}

bool Tape::requires_grad(Var v) const {
  check_owned(v);
  return nodes_[v.id].requires_grad;
}

Var Tape::record(Matrix value, std::span<const Var> parents,
                 Backprop backprop) {
  bool needs = false;
  for (const Var& p : parents) {
    check_owned(p);
    needs = needs || nodes_[p.id].requires_grad;
  }
  nodes_.push_back(
      Node{std::move(value), {}, needs, needs ? std::move(backprop) : nullptr});
  return Var{this, nodes_.size() - 1};
}

Matrix& Tape::grad_buffer(size_t id) {
  Node& node = nodes_[id];
  if (node.grad.size() != node.value.size() ||
      !node.grad.same_shape(node.value)) {
    node.grad = Matrix(node.value.rows(), node.value.cols());
  }
  return node.grad;
}

void Tape::backward(Var loss) {
  check_owned(loss);
  const Matrix& lv = nodes_[loss.id].value;
  check_shape(lv.rows() == 1 && lv.cols() == 1, "backward: loss must be 1x1");
  if (backward_done_) {
    throw Error(ErrorCode::kUntrackedParameter,
                "backward already ran on this tape");
  }
  backward_done_ = true;
  if (!nodes_[loss.id].requires_grad) return;
  grad_buffer(loss.id)(0, 0) = 1.0;
  for (size_t i = loss.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.requires_grad || !node.backprop) continue;
    if (!node.grad.same_shape(node.value) || node.grad.size() == 0) continue;
    node.backprop(*this, node.grad);
  }
}

Matrix Tape::grad(Var v) const {
  check_owned(v);
  const Node& node = nodes_[v.id];
  if (!node.requires_grad) {
    throw Error(ErrorCode::kUntrackedParameter,
                "gradient requested for an untracked value");
  }
  if (node.grad.same_shape(node.value) && node.grad.size() > 0) {
    return node.grad;
  }
  return Matrix(node.value.rows(), node.value.cols());
}

namespace {

void accumulate(Tape& t, Var v, const Matrix& g) {
  if (!t.requires_grad(v.id)) return;
  auto buf = t.grad_buffer(v.id).values();
  const auto src = g.values();
  for (size_t i = 0; i < buf.size(); ++i) buf[i] += src[i];
}

template <typename Fwd, typename Deriv>
Var elementwise(Var a, Fwd fwd, Deriv deriv) {
  Tape& t = *a.tape;
  Matrix out = a.value();
  for (double& v : out.values()) v = fwd(v);
  const Var parents[] = {a};
  return t.record(std::move(out), parents,
                  [a, deriv, self_id = t.size()](Tape& tp, const Matrix& g) {
                    if (!tp.requires_grad(a.id)) return;
                    const auto x = tp.value(a.id).values();
                    const auto y = tp.value(self_id).values();
                    auto buf = tp.grad_buffer(a.id).values();
                    const auto gv = g.values();
                    for (size_t i = 0; i < buf.size(); ++i) {
                      buf[i] += gv[i] * deriv(x[i], y[i]);
                    }
                  });
}

std::string shape_of(Var v) {
  return std::to_string(v.rows()) + "x" + std::to_string(v.cols());
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = *a.tape;
  Matrix out = numerics::matmul(a.value(), b.value());
  const Var parents[] = {a, b};
  return t.record(std::move(out), parents, [a, b](Tape& tp, const Matrix& g) {
    if (tp.requires_grad(a.id)) {
      accumulate(tp, a, numerics::matmul_transposed_b(g, tp.value(b.id)));
    }
    if (tp.requires_grad(b.id)) {
      accumulate(tp, b, numerics::matmul_transposed_a(tp.value(a.id), g));
    }
  });
}

Var matmul_transposed_b(Var a, Var b) {
  Tape& t = *a.tape;
  Matrix out = numerics::matmul_transposed_b(a.value(), b.value());
  const Var parents[] = {a, b};
  return t.record(std::move(out), parents, [a, b](Tape& tp, const Matrix& g) {
    if (tp.requires_grad(a.id)) {
      accumulate(tp, a, numerics::matmul(g, tp.value(b.id)));
    }
    if (tp.requires_grad(b.id)) {
      accumulate(tp, b, numerics::matmul_transposed_a(g, tp.value(a.id)));
    }
  });
}

Var add(Var a, Var b) {
  Tape& t = *a.tape;
  Matrix out = numerics::add(a.value(), b.value());
  const Var parents[] = {a, b};
  return t.record(std::move(out), parents, [a, b](Tape& tp, const Matrix& g) {
    accumulate(tp, a, g);
    accumulate(tp, b, g);
  });
}

Var add_row_broadcast(Var a, Var row) {
  Tape& t = *a.tape;
  check_shape(row.rows() == 1 && row.cols() == a.cols(),
              "add_row_broadcast: " + shape_of(a) + " + " + shape_of(row));
  Matrix out = a.value();
  const auto r = row.value().row(0);
  for (size_t i = 0; i < out.rows(); ++i) {
    auto o = out.row(i);
    for (size_t j = 0; j < o.size(); ++j) o[j] += r[j];
  }
  const Var parents[] = {a, row};
  return t.record(std::move(out), parents,
                  [a, row](Tape& tp, const Matrix& g) {
                    accumulate(tp, a, g);
                    if (!tp.requires_grad(row.id)) return;
                    auto buf = tp.grad_buffer(row.id).row(0);
                    for (size_t i = 0; i < g.rows(); ++i) {
                      const auto gr = g.row(i);
                      for (size_t j = 0; j < buf.size(); ++j) buf[j] += gr[j];
                    }
                  });
}

Var hadamard(Var a, Var b) {
  Tape& t = *a.tape;
  Matrix out = numerics::hadamard(a.value(), b.value());
  const Var parents[] = {a, b};
  return t.record(std::move(out), parents, [a, b](Tape& tp, const Matrix& g) {
    if (tp.requires_grad(a.id)) {
      accumulate(tp, a, numerics::hadamard(g, tp.value(b.id)));
    }
    if (tp.requires_grad(b.id)) {
      accumulate(tp, b, numerics::hadamard(g, tp.value(a.id)));
    }
  });
}

Var scale(Var a, double s) {
  return elementwise(
      a, [s](double x) { return s * x; },
      [s](double, double) { return s; });
}

Var leaky_relu(Var a, double alpha) {
  return elementwise(
      a, [alpha](double x) { return x > 0.0 ? x : alpha * x; },
      [alpha](double x, double) { return x > 0.0 ? 1.0 : alpha; });
}

Var relu(Var a) { return leaky_relu(a, 0.0); }

Var sigmoid(Var a) {
  return elementwise(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return elementwise(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var row_softmax(Var a) {
  Tape& t = *a.tape;
  Matrix out = numerics::row_softmax(a.value());
  const Var parents[] = {a};
  return t.record(std::move(out), parents,
                  [a, self_id = t.size()](Tape& tp, const Matrix& g) {
                    if (!tp.requires_grad(a.id)) return;
                    const Matrix& y = tp.value(self_id);
                    Matrix& buf = tp.grad_buffer(a.id);
                    for (size_t i = 0; i < y.rows(); ++i) {
                      const double inner = dot(g.row(i), y.row(i));
                      for (size_t j = 0; j < y.cols(); ++j) {
                        buf(i, j) += y(i, j) * (g(i, j) - inner);
                      }
                    }
                  });
}

Var row_l2_normalize(Var a) {
  Tape& t = *a.tape;
  Matrix out = numerics::row_l2_normalize(a.value());
  const Var parents[] = {a};
  return t.record(
      std::move(out), parents,
      [a, self_id = t.size()](Tape& tp, const Matrix& g) {
        if (!tp.requires_grad(a.id)) return;
        const Matrix& x = tp.value(a.id);
        const Matrix& y = tp.value(self_id);
        Matrix& buf = tp.grad_buffer(a.id);
        for (size_t i = 0; i < x.rows(); ++i) {
          const double norm = std::sqrt(squared_norm(x.row(i)));
          if (norm == 0.0) {
            for (size_t j = 0; j < x.cols(); ++j) buf(i, j) += g(i, j);
            continue;
          }
          const double proj = dot(y.row(i), g.row(i));
          for (size_t j = 0; j < x.cols(); ++j) {
            buf(i, j) += (g(i, j) - y(i, j) * proj) / norm;
          }
        }
      });
}

Var concat_cols(Var a, Var b) {
  Tape& t = *a.tape;
  Matrix out = numerics::concat_cols(a.value(), b.value());
  const size_t split = a.cols();
  const Var parents[] = {a, b};
  return t.record(std::move(out), parents,
                  [a, b, split](Tape& tp, const Matrix& g) {
                    if (tp.requires_grad(a.id)) {
                      Matrix& ga = tp.grad_buffer(a.id);
                      for (size_t i = 0; i < g.rows(); ++i) {
                        for (size_t j = 0; j < split; ++j) ga(i, j) += g(i, j);
                      }
                    }
                    if (tp.requires_grad(b.id)) {
                      Matrix& gb = tp.grad_buffer(b.id);
                      for (size_t i = 0; i < g.rows(); ++i) {
                        for (size_t j = split; j < g.cols(); ++j) {
                          gb(i, j - split) += g(i, j);
                        }
                      }
                    }
                  });
}

Var slice_cols(Var a, size_t begin, size_t end) {
  Tape& t = *a.tape;
  check_shape(begin <= end && end <= a.cols(),
              "slice_cols out of range on " + shape_of(a));
  const Matrix& in = a.value();
  Matrix out(in.rows(), end - begin);
  for (size_t i = 0; i < in.rows(); ++i) {
    for (size_t j = begin; j < end; ++j) out(i, j - begin) = in(i, j);
  }
  const Var parents[] = {a};
  return t.record(std::move(out), parents,
                  [a, begin](Tape& tp, const Matrix& g) {
                    if (!tp.requires_grad(a.id)) return;
                    Matrix& ga = tp.grad_buffer(a.id);
                    for (size_t i = 0; i < g.rows(); ++i) {
                      for (size_t j = 0; j < g.cols(); ++j) {
                        ga(i, begin + j) += g(i, j);
                      }
                    }
                  });
}

Var gather_rows(Var a, std::span<const size_t> rows) {
  Tape& t = *a.tape;
  const Matrix& in = a.value();
  Matrix out(rows.size(), in.cols());
  for (size_t k = 0; k < rows.size(); ++k) {
    check_shape(rows[k] < in.rows(), "gather_rows: index out of range");
    std::copy(in.row(rows[k]).begin(), in.row(rows[k]).end(),
              out.row(k).begin());
  }
  const Var parents[] = {a};
  return t.record(std::move(out), parents,
                  [a, idx = std::vector<size_t>(rows.begin(), rows.end())](
                      Tape& tp, const Matrix& g) {
                    if (!tp.requires_grad(a.id)) return;
                    Matrix& ga = tp.grad_buffer(a.id);
                    for (size_t k = 0; k < idx.size(); ++k) {
                      auto dst = ga.row(idx[k]);
                      const auto src = g.row(k);
                      for (size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
                    }
                  });
}

Var scatter_rows(Var base, std::span<const size_t> rows, Var replacement) {
  Tape& t = *base.tape;
  check_shape(replacement.rows() == rows.size() &&
                  replacement.cols() == base.cols(),
              "scatter_rows: replacement " + shape_of(replacement));
  Matrix out = base.value();
  std::vector<bool> replaced(out.rows(), false);
  for (size_t k = 0; k < rows.size(); ++k) {
    check_shape(rows[k] < out.rows(), "scatter_rows: index out of range");
    check_shape(!replaced[rows[k]], "scatter_rows: duplicate index");
    replaced[rows[k]] = true;
    const auto src = replacement.value().row(k);
    std::copy(src.begin(), src.end(), out.row(rows[k]).begin());
  }
  const Var parents[] = {base, replacement};
  return t.record(
      std::move(out), parents,
      [base, replacement, idx = std::vector<size_t>(rows.begin(), rows.end()),
       replaced = std::move(replaced)](Tape& tp, const Matrix& g) {
        if (tp.requires_grad(base.id)) {
          Matrix& gb = tp.grad_buffer(base.id);
          for (size_t i = 0; i < g.rows(); ++i) {
            if (replaced[i]) continue;
            for (size_t j = 0; j < g.cols(); ++j) gb(i, j) += g(i, j);
          }
        }
        if (tp.requires_grad(replacement.id)) {
          Matrix& gr = tp.grad_buffer(replacement.id);
          for (size_t k = 0; k < idx.size(); ++k) {
            for (size_t j = 0; j < g.cols(); ++j) gr(k, j) += g(idx[k], j);
          }
        }
      });
}

Var spmm(const SparseMatrix& s, Var a) {
  Tape& t = *a.tape;
  Matrix out = s.multiply(a.value());
  const Var parents[] = {a};
  return t.record(std::move(out), parents, [a, s](Tape& tp, const Matrix& g) {
    accumulate(tp, a, s.multiply_transposed(g));
  });
}

Var sum(Var a) {
  Tape& t = *a.tape;
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  const Var parents[] = {a};
  return t.record(Matrix(1, 1, total), parents,
                  [a](Tape& tp, const Matrix& g) {
                    if (!tp.requires_grad(a.id)) return;
                    for (double& v : tp.grad_buffer(a.id).values()) {
                      v += g(0, 0);
                    }
                  });
}

Var mean_squared_l2_loss(Var x, Var target) {
  Tape& t = *x.tape;
  check_shape(x.value().same_shape(target.value()),
              "mean_squared_l2_loss: " + shape_of(x) + " vs " +
                  shape_of(target));
  const Matrix diff = numerics::subtract(x.value(), target.value());
  const double n = static_cast<double>(std::max<size_t>(diff.rows(), 1));
  const double loss = dot(diff.values(), diff.values()) / n;
  const Var parents[] = {x, target};
  return t.record(Matrix(1, 1, loss), parents,
                  [x, target, diff, n](Tape& tp, const Matrix& g) {
                    const Matrix d = numerics::scale(diff, 2.0 * g(0, 0) / n);
                    accumulate(tp, x, d);
                    if (tp.requires_grad(target.id)) {
                      accumulate(tp, target, numerics::scale(d, -1.0));
                    }
                  });
}

Var cross_entropy_from_logits(Var logits, std::span<const size_t> labels,
                              const std::vector<bool>& allowed) {
  Tape& t = *logits.tape;
  const Matrix& l = logits.value();
  check_shape(labels.size() == l.rows(),
              "cross_entropy: label count != logit rows");
  check_shape(allowed.empty() || allowed.size() == l.cols(),
              "cross_entropy: mask width != logit cols");
  auto is_allowed = [&allowed](size_t j) {
    return allowed.empty() || allowed[j];
  };
  Matrix probs(l.rows(), l.cols());
  double total = 0.0;
  for (size_t i = 0; i < l.rows(); ++i) {
    check_shape(labels[i] < l.cols() && is_allowed(labels[i]),
                "cross_entropy: label outside the allowed columns");
    double m = -INFINITY;
    for (size_t j = 0; j < l.cols(); ++j) {
      if (is_allowed(j)) m = std::max(m, l(i, j));
    }
    double z = 0.0;
    for (size_t j = 0; j < l.cols(); ++j) {
      if (!is_allowed(j)) continue;
      probs(i, j) = std::exp(l(i, j) - m);
      z += probs(i, j);
    }
    for (size_t j = 0; j < l.cols(); ++j) probs(i, j) /= z;
    total += (m + std::log(z)) - l(i, labels[i]);
  }
  const double n = static_cast<double>(std::max<size_t>(l.rows(), 1));
  const Var parents[] = {logits};
  return t.record(
      Matrix(1, 1, total / n), parents,
      [logits, probs = std::move(probs),
       lab = std::vector<size_t>(labels.begin(), labels.end()),
       n](Tape& tp, const Matrix& g) {
        if (!tp.requires_grad(logits.id)) return;
        Matrix& gl = tp.grad_buffer(logits.id);
        const double s = g(0, 0) / n;
        for (size_t i = 0; i < probs.rows(); ++i) {
          for (size_t j = 0; j < probs.cols(); ++j) {
            gl(i, j) += s * (probs(i, j) - (j == lab[i] ? 1.0 : 0.0));
          }
        }
      });
}

Var segment_mean(Var a, std::span<const size_t> offsets) {
  Tape& t = *a.tape;
  const Matrix& in = a.value();
  check_shape(!offsets.empty() && offsets.back() == in.rows(),
              "segment_mean: offsets do not cover the input rows");
  const size_t segments = offsets.size() - 1;
  Matrix out(segments, in.cols());
  for (size_t s = 0; s < segments; ++s) {
    const size_t len = offsets[s + 1] - offsets[s];
    if (len == 0) continue;
    auto o = out.row(s);
    for (size_t r = offsets[s]; r < offsets[s + 1]; ++r) {
      const auto src = in.row(r);
      for (size_t j = 0; j < o.size(); ++j) o[j] += src[j];
    }
    for (double& v : o) v /= static_cast<double>(len);
  }
  const Var parents[] = {a};
  return t.record(
      std::move(out), parents,
      [a, off = std::vector<size_t>(offsets.begin(), offsets.end())](
          Tape& tp, const Matrix& g) {
        if (!tp.requires_grad(a.id)) return;
        Matrix& ga = tp.grad_buffer(a.id);
        for (size_t s = 0; s + 1 < off.size(); ++s) {
          const size_t len = off[s + 1] - off[s];
          if (len == 0) continue;
          const double w = 1.0 / static_cast<double>(len);
          for (size_t r = off[s]; r < off[s + 1]; ++r) {
            for (size_t j = 0; j < g.cols(); ++j) ga(r, j) += w * g(s, j);
          }
        }
      });
}

namespace {

Matrix rows_of(const Matrix& m, size_t begin, size_t end) {
  Matrix out(end - begin, m.cols());
  for (size_t r = begin; r < end; ++r) {
    std::copy(m.row(r).begin(), m.row(r).end(), out.row(r - begin).begin());
  }
  return out;
}

void add_rows_into(Matrix& dst, size_t begin, const Matrix& src) {
  for (size_t r = 0; r < src.rows(); ++r) {
    auto d = dst.row(begin + r);
    const auto s = src.row(r);
    for (size_t j = 0; j < d.size(); ++j) d[j] += s[j];
  }
}

}  // namespace

Var segment_attention(Var q, Var k, Var v, std::span<const size_t> offsets) {
  Tape& t = *q.tape;
  check_shape(q.value().same_shape(k.value()),
              "segment_attention: Q " + shape_of(q) + " vs K " + shape_of(k));
  check_shape(v.rows() == q.rows(), "segment_attention: V rows != Q rows");
  check_shape(!offsets.empty() && offsets.back() == q.rows(),
              "segment_attention: offsets do not cover the input rows");
  const double inv_sqrt_d =
      1.0 / std::sqrt(static_cast<double>(std::max<size_t>(q.cols(), 1)));
  const size_t segments = offsets.size() - 1;
  std::vector<Matrix> attention(segments);
  Matrix out(v.rows(), v.cols());
  for (size_t s = 0; s < segments; ++s) {
    const size_t b = offsets[s];
    const size_t e = offsets[s + 1];
    if (e == b) continue;
    const Matrix qs = rows_of(q.value(), b, e);
    const Matrix ks = rows_of(k.value(), b, e);
    const Matrix vs = rows_of(v.value(), b, e);
    attention[s] = numerics::row_softmax(
        numerics::scale(numerics::matmul_transposed_b(qs, ks), inv_sqrt_d));
    const Matrix zs = numerics::matmul(attention[s], vs);
    for (size_t r = 0; r < zs.rows(); ++r) {
      std::copy(zs.row(r).begin(), zs.row(r).end(), out.row(b + r).begin());
    }
  }
  const Var parents[] = {q, k, v};
  return t.record(
      std::move(out), parents,
      [q, k, v, inv_sqrt_d, attention = std::move(attention),
       off = std::vector<size_t>(offsets.begin(), offsets.end())](
          Tape& tp, const Matrix& g) {
        for (size_t s = 0; s + 1 < off.size(); ++s) {
          const size_t b = off[s];
          const size_t e = off[s + 1];
          if (e == b) continue;
          const Matrix& p = attention[s];
          const Matrix gz = rows_of(g, b, e);
          const Matrix vs = rows_of(tp.value(v.id), b, e);
          if (tp.requires_grad(v.id)) {
            add_rows_into(tp.grad_buffer(v.id), b,
                          numerics::matmul_transposed_a(p, gz));
          }
          if (!tp.requires_grad(q.id) && !tp.requires_grad(k.id)) continue;
          const Matrix gp = numerics::matmul_transposed_b(gz, vs);
          Matrix gs(p.rows(), p.cols());
          for (size_t i = 0; i < p.rows(); ++i) {
            const double inner = dot(gp.row(i), p.row(i));
            for (size_t j = 0; j < p.cols(); ++j) {
              gs(i, j) = p(i, j) * (gp(i, j) - inner) * inv_sqrt_d;
            }
          }
          if (tp.requires_grad(q.id)) {
            add_rows_into(tp.grad_buffer(q.id), b,
                          numerics::matmul(gs, rows_of(tp.value(k.id), b, e)));
          }
          if (tp.requires_grad(k.id)) {
            add_rows_into(tp.grad_buffer(k.id), b,
                          numerics::matmul_transposed_a(
                              gs, rows_of(tp.value(q.id), b, e)));
          }
        }
      });
}

Var linear_combination(Var coeffs, size_t row, std::span<const Var> terms) {
  Tape& t = *coeffs.tape;
  check_shape(row < coeffs.rows() && terms.size() == coeffs.cols(),
              "linear_combination: coefficient matrix " + shape_of(coeffs));
  check_shape(!terms.empty(), "linear_combination: no terms");
  Matrix out(terms[0].rows(), terms[0].cols());
  for (size_t b = 0; b < terms.size(); ++b) {
    check_shape(terms[b].value().same_shape(out),
                "linear_combination: mismatched term shapes");
    const double c = coeffs.value()(row, b);
    auto o = out.values();
    const auto src = terms[b].value().values();
    for (size_t i = 0; i < o.size(); ++i) o[i] += c * src[i];
  }
  std::vector<Var> parents(terms.begin(), terms.end());
  parents.push_back(coeffs);
  return t.record(
      std::move(out), parents,
      [coeffs, row, ts = std::vector<Var>(terms.begin(), terms.end())](
          Tape& tp, const Matrix& g) {
        for (size_t b = 0; b < ts.size(); ++b) {
          if (tp.requires_grad(ts[b].id)) {
            accumulate(tp, ts[b],
                       numerics::scale(g, tp.value(coeffs.id)(row, b)));
          }
          if (tp.requires_grad(coeffs.id)) {
            tp.grad_buffer(coeffs.id)(row, b) +=
                dot(g.values(), tp.value(ts[b].id).values());
          }
        }
      });
}

}  // namespace kgzsl::numerics::ad
