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

#include "kgzsl/trainer/embedding_table.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::trainer {

using numerics::Matrix;

TargetWeights make_targets(const gnn::ConceptVectors& vectors) {
  if (vectors.empty()) {
    throw Error(ErrorCode::kInvalidDataset, "target weight set is empty");
  }
  TargetWeights t;
  const size_t dim = vectors.begin()->second.size();
  t.vectors = Matrix(vectors.size(), dim);
  size_t i = 0;
  for (const auto& [name, v] : vectors) {
    if (v.size() != dim) {
      throw Error(ErrorCode::kDimMismatch,
                  "target '" + name.str() + "' has width " +
                      std::to_string(v.size()) + ", expected " +
                      std::to_string(dim));
    }
    const double norm = std::sqrt(numerics::squared_norm(v));
    if (!(norm > 0.0)) {
      throw Error(ErrorCode::kInvalidDataset,
                  "target '" + name.str() + "' is a zero vector");
    }
    for (size_t k = 0; k < dim; ++k) t.vectors(i, k) = v[k] / norm;
    t.names.push_back(name);
    ++i;
  }
  return t;
}

TargetWeights read_targets(std::istream& in) {
  return make_targets(gnn::read_concept_vectors(in));
}

EmbeddingTable::EmbeddingTable(std::vector<kg::ConceptId> names,
                               Matrix vectors, nlohmann::json provenance)
    : provenance_(std::move(provenance)) {
  if (names.size() != vectors.rows()) {
    throw Error(ErrorCode::kDimMismatch,
                "embedding table has " + std::to_string(names.size()) +
                    " names but " + std::to_string(vectors.rows()) + " rows");
  }
  std::vector<size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return names[a] < names[b]; });
  vectors_ = Matrix(names.size(), vectors.cols());
  for (size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && names[order[r]] == names[order[r - 1]]) {
      throw Error(ErrorCode::kMalformedLine,
                  "duplicate class '" + names[order[r]].str() + "'");
    }
    names_.push_back(names[order[r]]);
    const auto src = vectors.row(order[r]);
    std::copy(src.begin(), src.end(), vectors_.row(r).begin());
  }
}

std::optional<size_t> EmbeddingTable::find(const kg::ConceptId& c) const {
  const auto it = std::lower_bound(names_.begin(), names_.end(), c);
  if (it == names_.end() || *it != c) return std::nullopt;
  return static_cast<size_t>(it - names_.begin());
}

std::vector<double> EmbeddingTable::row(const kg::ConceptId& c) const {
  const auto i = find(c);
  if (!i) {
    throw Error(ErrorCode::kMissingClassEmbedding,
                "no embedding for class '" + c.str() + "'");
  }
  const auto r = vectors_.row(*i);
  return {r.begin(), r.end()};
}

void write_embedding_table(const std::filesystem::path& path,
                           const EmbeddingTable& table) {
  std::ostringstream out;
  for (size_t i = 0; i < table.size(); ++i) {
    out << table.names()[i].str();
    for (double x : table.vectors().row(i)) out << ' ' << format_double(x);
    out << '\n';
  }
  write_file(path, out.str());
  write_file(path.string() + ".json", table.provenance().dump(2) + "\n");
}

EmbeddingTable read_embedding_table(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  const auto vectors = gnn::read_concept_vectors(in);
  std::vector<kg::ConceptId> names;
  Matrix m(vectors.size(), vectors.empty() ? 0 : vectors.begin()->second.size());
  size_t i = 0;
  for (const auto& [name, v] : vectors) {
    names.push_back(name);
    std::copy(v.begin(), v.end(), m.row(i++).begin());
  }
  nlohmann::json provenance = nlohmann::json::object();
  const std::filesystem::path sidecar = path.string() + ".json";
  if (std::filesystem::exists(sidecar)) {
    try {
      provenance = nlohmann::json::parse(read_file(sidecar));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "bad provenance sidecar " + sidecar.string() + ": " + e.what());
    }
  }
  return EmbeddingTable(std::move(names), std::move(m), std::move(provenance));
}

}  // namespace kgzsl::trainer
