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

#ifndef KGZSL_TRAINER_EMBEDDING_TABLE_H_
#define KGZSL_TRAINER_EMBEDDING_TABLE_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "kgzsl/gnn/features.h"
#include "kgzsl/kg/concept.h"
#include "kgzsl/numerics/matrix.h"

namespace kgzsl::trainer {

// Anchor targets: unit-norm rows keyed by concept, sorted by name.
struct TargetWeights {
  std::vector<kg::ConceptId> names;
  numerics::Matrix vectors;

  size_t dim() const { return vectors.cols(); }
  size_t size() const { return names.size(); }
};

// Normalizes every row; zero or empty input is kInvalidDataset.
TargetWeights make_targets(const gnn::ConceptVectors& vectors);
TargetWeights read_targets(std::istream& in);

// Class name -> embedding rows, kept sorted by name.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // Throws kDimMismatch if row count differs from the name count and
  // kMalformedLine on duplicate names.
  EmbeddingTable(std::vector<kg::ConceptId> names, numerics::Matrix vectors,
                 nlohmann::json provenance = nlohmann::json::object());

  const std::vector<kg::ConceptId>& names() const { return names_; }
  const numerics::Matrix& vectors() const { return vectors_; }
  const nlohmann::json& provenance() const { return provenance_; }
  nlohmann::json& provenance() { return provenance_; }
  size_t size() const { return names_.size(); }
  size_t dim() const { return vectors_.cols(); }

  std::optional<size_t> find(const kg::ConceptId& c) const;
  std::vector<double> row(const kg::ConceptId& c) const;  // kMissingClassEmbedding

 private:
  std::vector<kg::ConceptId> names_;
  numerics::Matrix vectors_;
  nlohmann::json provenance_ = nlohmann::json::object();
};

// Concept-keyed rows; the provenance lives in `<path>.json`.
void write_embedding_table(const std::filesystem::path& path,
                           const EmbeddingTable& table);
EmbeddingTable read_embedding_table(const std::filesystem::path& path);

}  // namespace kgzsl::trainer

#endif  // KGZSL_TRAINER_EMBEDDING_TABLE_H_
