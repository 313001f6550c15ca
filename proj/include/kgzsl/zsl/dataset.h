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

#ifndef KGZSL_ZSL_DATASET_H_
#define KGZSL_ZSL_DATASET_H_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kgzsl/kg/concept.h"
#include "kgzsl/numerics/matrix.h"

namespace kgzsl::zsl {

enum class Split { kTrain, kVal, kTest };

std::string_view split_name(Split s);
Split parse_split(std::string_view s);  // kMalformedLine

struct FeatureItem {
  std::string id;
  Split split = Split::kTrain;
  kg::ConceptId label;
  std::vector<double> feature;
};

struct ClassPartition {
  std::vector<kg::ConceptId> seen;    // sorted
  std::vector<kg::ConceptId> unseen;  // sorted

  bool is_seen(const kg::ConceptId& c) const;
  bool is_unseen(const kg::ConceptId& c) const;
  // Seen block then unseen block.
  std::vector<kg::ConceptId> class_order() const;
};

struct FeatureDataset {
  size_t dim = 0;
  std::vector<FeatureItem> items;
  ClassPartition classes;

  // Throws kInvalidDataset when the partition overlaps or a label is not
  // a known class, kUnseenLabelInTrain for an unseen train or val label
  // and kDimMismatch for a feature of the wrong width.
  void validate() const;

  std::vector<const FeatureItem*> in_split(Split s) const;
};

// `class<TAB>seen|unseen`. Lists are returned sorted.
ClassPartition read_classes(std::istream& in);
void write_classes(std::ostream& out, const ClassPartition& p);

// Header `dim F`, then `id<TAB>split<TAB>label<TAB>f1 ... fF`.
FeatureDataset read_features(std::istream& features, std::istream& classes);
void write_features(std::ostream& out, const FeatureDataset& d);

// Stacked features of the given items.
numerics::Matrix stack_features(const std::vector<const FeatureItem*>& items,
                                size_t dim);

}  // namespace kgzsl::zsl

#endif  // KGZSL_ZSL_DATASET_H_
