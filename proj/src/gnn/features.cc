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

#include "kgzsl/gnn/features.h"

#include <cmath>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::gnn {

ConceptVectors read_concept_vectors(std::istream& in) {
  ConceptVectors out;
  size_t width = 0;
  for_each_record(in, [&](size_t line, std::string_view record) {
    const auto fields = split_whitespace(record);
    const auto where = " at line " + std::to_string(line);
    if (fields.size() < 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected a concept followed by values" + where);
    }
    std::vector<double> v;
    v.reserve(fields.size() - 1);
    for (size_t i = 1; i < fields.size(); ++i) {
      const auto x = parse_double(fields[i]);
      if (!x) throw Error(ErrorCode::kMalformedLine, "bad number" + where);
      if (!std::isfinite(*x)) {
        throw Error(ErrorCode::kNonFiniteInput, "non-finite value" + where);
      }
      v.push_back(*x);
    }
    if (width == 0) width = v.size();
    if (v.size() != width) {
      throw Error(ErrorCode::kDimMismatch,
                  "vector has " + std::to_string(v.size()) + " values, expected " +
                      std::to_string(width) + where);
    }
    auto name = kg::ConceptId(std::string(fields[0]));
    if (!out.emplace(std::move(name), std::move(v)).second) {
      throw Error(ErrorCode::kMalformedLine,
                  "duplicate concept '" + std::string(fields[0]) + "'" + where);
    }
  });
  return out;
}

void write_concept_vectors(std::ostream& out, const ConceptVectors& vectors) {
  for (const auto& [name, v] : vectors) {
    out << name.str();
    for (double x : v) out << ' ' << format_double(x);
    out << '\n';
  }
}

numerics::Matrix seeded_node_features(size_t num_nodes, size_t dim,
                                      numerics::Rng& rng) {
  return numerics::glorot_init(num_nodes, dim, rng);
}

NodeFeatures assemble_node_features(const kg::KnowledgeGraph& g,
                                    const ConceptVectors& vectors, size_t dim,
                                    numerics::Rng& rng) {
  NodeFeatures f{seeded_node_features(g.num_nodes(), dim, rng), {}};
  for (size_t i = 0; i < g.num_nodes(); ++i) {
    const auto& name = g.nodes()[i].name;
    const auto it = vectors.find(name);
    if (it == vectors.end()) {
      f.missing.push_back(name.str());
      continue;
    }
    if (it->second.size() != dim) {
      throw Error(ErrorCode::kDimMismatch,
                  "node feature for '" + name.str() + "' has " +
                      std::to_string(it->second.size()) + " values, expected " +
                      std::to_string(dim));
    }
    std::copy(it->second.begin(), it->second.end(), f.matrix.row(i).begin());
  }
  return f;
}

}  // namespace kgzsl::gnn
