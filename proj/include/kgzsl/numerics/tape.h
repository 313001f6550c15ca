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

#ifndef KGZSL_NUMERICS_TAPE_H_
#define KGZSL_NUMERICS_TAPE_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kgzsl/numerics/matrix.h"

// Minimal reverse-mode automatic differentiation over dense matrices.
//
// A Tape records every primitive applied to its variables in creation order,
// which is already a topological order of the computation. backward() walks
// the records in reverse and visits each one at most once. Tapes are
// single-threaded: build one per forward pass and discard it.
namespace kgzsl::numerics::ad {

class Tape;

// Handle to a value recorded on a tape.
struct Var {
  Tape* tape = nullptr;
  size_t id = 0;

  const Matrix& value() const;
  size_t rows() const { return value().rows(); }
  size_t cols() const { return value().cols(); }
};

// Compact triplet form used by graph aggregation.
struct SparseMatrix {
  struct Entry {
    size_t row;
    size_t col;
    double value;
  };
  size_t rows = 0;
  size_t cols = 0;
  std::vector<Entry> entries;

  Matrix to_dense() const;
  Matrix multiply(const Matrix& dense) const;             // S * D
  Matrix multiply_transposed(const Matrix& dense) const;  // S^T * D
};

class Tape {
 public:
  // Backward rule of one record: receives the gradient flowing into the
  // record's output and accumulates into its parents via grad_buffer().
  using Backprop = std::function<void(Tape&, const Matrix& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaves. Both reject non-finite entries with kNonFiniteInput.
  Var constant(Matrix value);
  Var variable(Matrix value);

  const Matrix& value(Var v) const;
  bool requires_grad(Var v) const;

  // Runs the reverse pass from a 1x1 loss. May be called once per tape.
  void backward(Var loss);

  // Gradient of the last backward() w.r.t. a tracked variable. Zero when the
  // loss does not depend on it. Throws kUntrackedParameter for constants and
  // for handles that belong to another tape.
  Matrix grad(Var v) const;

  size_t size() const { return nodes_.size(); }

  // Primitive-author interface.
  Var record(Matrix value, std::span<const Var> parents, Backprop backprop);
  bool requires_grad(size_t id) const { return nodes_[id].requires_grad; }
  const Matrix& value(size_t id) const { return nodes_[id].value; }
  Matrix& grad_buffer(size_t id);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Backprop backprop;
  };

  void check_owned(Var v) const;

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

Var matmul(Var a, Var b);
Var matmul_transposed_b(Var a, Var b);  // a * b^T
Var add(Var a, Var b);
Var add_row_broadcast(Var a, Var row);  // row: 1 x cols, added to every row
Var hadamard(Var a, Var b);
Var scale(Var a, double s);
Var leaky_relu(Var a, double alpha);
Var relu(Var a);
Var sigmoid(Var a);
Var tanh(Var a);
Var row_softmax(Var a);
// Zero rows pass through unchanged (their gradient is the identity).
Var row_l2_normalize(Var a);
Var concat_cols(Var a, Var b);
Var slice_cols(Var a, size_t begin, size_t end);
Var gather_rows(Var a, std::span<const size_t> rows);
// Copy of `base` with rows `rows[k]` replaced by row k of `replacement`.
Var scatter_rows(Var base, std::span<const size_t> rows, Var replacement);
Var spmm(const SparseMatrix& s, Var a);
Var sum(Var a);
// Mean over rows of the squared L2 distance between x and target rows.
Var mean_squared_l2_loss(Var x, Var target);
// Mean over rows of -log softmax(logits)[label]. Columns whose `allowed`
// flag is false are excluded from the softmax and receive zero gradient.
// An empty `allowed` admits every column.
Var cross_entropy_from_logits(Var logits, std::span<const size_t> labels,
                              const std::vector<bool>& allowed = {});
// Rows are grouped into consecutive segments [offsets[k], offsets[k+1]).
Var segment_mean(Var a, std::span<const size_t> offsets);
// Per segment: softmax(Q K^T / sqrt(d)) V with d = Q.cols().
Var segment_attention(Var q, Var k, Var v, std::span<const size_t> offsets);
// sum_b coeffs(row, b) * terms[b]; all terms share one shape.
Var linear_combination(Var coeffs, size_t row, std::span<const Var> terms);

}  // namespace kgzsl::numerics::ad

#endif  // KGZSL_NUMERICS_TAPE_H_
