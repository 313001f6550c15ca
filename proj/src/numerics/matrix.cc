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

#include "kgzsl/numerics/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::numerics {

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  check_shape(a.same_shape(b), std::string(op) + ": " + shape_str(a) +
                                   " vs " + shape_str(b));
}

}  // namespace

Matrix Matrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const size_t r = rows.size();
  const size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  size_t i = 0;
  for (const auto& row : rows) {
    check_shape(row.size() == c, "from_rows: ragged rows");
    std::copy(row.begin(), row.end(), m.row(i).begin());
    ++i;
  }
  return m;
}

Matrix Matrix::from_vector(size_t rows, size_t cols,
                           std::vector<double> values) {
  check_shape(values.size() == rows * cols, "from_vector: wrong length");
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.values_ = std::move(values);
  return m;
}

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Matrix::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_shape(a.cols() == b.rows(),
              "matmul: " + shape_str(a) + " * " + shape_str(b));
  Matrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto b_row = b.row(k);
      for (size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

Matrix matmul_transposed_b(const Matrix& a, const Matrix& b) {
  check_shape(a.cols() == b.cols(),
              "matmul_transposed_b: " + shape_str(a) + " * " + shape_str(b) +
                  "^T");
  Matrix out(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  }
  return out;
}

Matrix matmul_transposed_a(const Matrix& a, const Matrix& b) {
  check_shape(a.rows() == b.rows(),
              "matmul_transposed_a: " + shape_str(a) + "^T * " +
                  shape_str(b));
  Matrix out(a.cols(), b.cols());
  for (size_t k = 0; k < a.rows(); ++k) {
    const auto b_row = b.row(k);
    for (size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      auto out_row = out.row(i);
      for (size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  return out;
}

Matrix scale(const Matrix& a, double s) {
  Matrix out = a;
  for (double& v : out.values()) v *= s;
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
  return out;
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
  check_shape(a.rows() == b.rows(),
              "concat_cols: " + shape_str(a) + " | " + shape_str(b));
  Matrix out(a.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    auto o = out.row(i);
    std::copy(a.row(i).begin(), a.row(i).end(), o.begin());
    std::copy(b.row(i).begin(), b.row(i).end(), o.begin() + a.cols());
  }
  return out;
}

Matrix row_softmax(const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    const auto in = a.row(i);
    auto o = out.row(i);
    if (in.empty()) continue;
    const double m = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (size_t j = 0; j < in.size(); ++j) {
      o[j] = std::exp(in[j] - m);
      total += o[j];
    }
    for (double& v : o) v /= total;
  }
  return out;
}

Matrix row_l2_normalize(const Matrix& a, std::vector<size_t>* zero_rows) {
  Matrix out = a;
  for (size_t i = 0; i < a.rows(); ++i) {
    const double norm = std::sqrt(squared_norm(a.row(i)));
    if (norm == 0.0) {
      if (zero_rows != nullptr) zero_rows->push_back(i);
      continue;
    }
    for (double& v : out.row(i)) v /= norm;
  }
  return out;
}

double frobenius_dot(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_dot");
  return dot(a.values(), b.values());
}

double squared_norm(std::span<const double> v) { return dot(v, v); }

double dot(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  }
  return worst;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << "dims " << m.rows() << ' ' << m.cols() << '\n';
  for (size_t i = 0; i < m.rows(); ++i) {
    for (size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in) {
  std::string line;
  size_t rows = 0;
  size_t cols = 0;
  bool have_header = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_whitespace(t);
    const auto r = fields.size() == 3 ? parse_int(fields[1]) : std::nullopt;
    const auto c = fields.size() == 3 ? parse_int(fields[2]) : std::nullopt;
    if (fields.size() != 3 || fields[0] != "dims" || !r || !c || *r < 0 ||
        *c < 0) {
      throw Error(ErrorCode::kMalformedLine,
                  "matrix header expected 'dims R C' at line " +
                      std::to_string(line_no));
    }
    rows = static_cast<size_t>(*r);
    cols = static_cast<size_t>(*c);
    have_header = true;
    break;
  }
  if (!have_header) {
    throw Error(ErrorCode::kMalformedLine, "matrix header missing");
  }
  Matrix m(rows, cols);
  size_t r = 0;
  while (r < rows && std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_whitespace(t);
    if (fields.size() != cols) {
      throw Error(ErrorCode::kMalformedLine,
                  "matrix row has " + std::to_string(fields.size()) +
                      " values, expected " + std::to_string(cols) +
                      " at line " + std::to_string(line_no));
    }
    for (size_t c = 0; c < cols; ++c) {
      const auto v = parse_double(fields[c]);
      if (!v) {
        throw Error(ErrorCode::kMalformedLine,
                    "bad number at line " + std::to_string(line_no));
      }
      if (!std::isfinite(*v)) {
        throw Error(ErrorCode::kNonFiniteInput,
                    "non-finite value at line " + std::to_string(line_no));
      }
      m(r, c) = *v;
    }
    ++r;
  }
  if (r != rows) {
    throw Error(ErrorCode::kMalformedLine,
                "matrix truncated: " + std::to_string(r) + " of " +
                    std::to_string(rows) + " rows");
  }
  return m;
}

}  // namespace kgzsl::numerics
