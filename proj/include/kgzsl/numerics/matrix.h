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

#ifndef KGZSL_NUMERICS_MATRIX_H_
#define KGZSL_NUMERICS_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace kgzsl::numerics {

// Dense row-major matrix of doubles. Zero-sized dimensions are allowed so
// that empty graphs and empty batches need no special casing.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  static Matrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_vector(size_t rows, size_t cols,
                            std::vector<double> values);
  static Matrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return values_.size(); }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(size_t r, size_t c) { return values_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;
  void fill(double v);

  // Bitwise comparison of shape and contents.
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> values_;
};

// Plain kernels. All throw Error(kShapeMismatch) on incompatible shapes.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_transposed_b(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_transposed_a(const Matrix& a, const Matrix& b);  // a^T * b
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix concat_cols(const Matrix& a, const Matrix& b);
Matrix row_softmax(const Matrix& a);
// Rows with zero norm are copied unchanged and reported in `zero_rows`.
Matrix row_l2_normalize(const Matrix& a,
                        std::vector<size_t>* zero_rows = nullptr);
double frobenius_dot(const Matrix& a, const Matrix& b);
double squared_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs_diff(const Matrix& a, const Matrix& b);

// "dims R C" followed by R lines of C space-separated decimals.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

}  // namespace kgzsl::numerics

#endif  // KGZSL_NUMERICS_MATRIX_H_
