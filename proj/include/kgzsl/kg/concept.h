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

#ifndef KGZSL_KG_CONCEPT_H_
#define KGZSL_KG_CONCEPT_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace kgzsl::kg {

// Normalized concept token: lowercase, non-empty, no whitespace.
class ConceptId {
 public:
  ConceptId() = default;
  // Throws Error(kEmptyConcept) when `normalized` is empty and
  // Error(kMalformedLine) when it is not in normalized form.
  explicit ConceptId(std::string normalized);

  const std::string& str() const { return name_; }
  bool empty() const { return name_.empty(); }

  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;

 private:
  std::string name_;
};

// Trims, strips a "/c/<lang>/" prefix (and anything after the concept
// segment of such a URI), lowercases and joins whitespace runs with '_'.
ConceptId normalize_concept(std::string_view raw);

// Language tag of a "/c/<lang>/..." URI; nullopt for plain tokens.
std::optional<std::string> concept_language(std::string_view raw);

enum class RelationCategory { kCommonSense, kLexicographic };

std::string_view relation_category_tag(RelationCategory c);  // "CS" / "LX"
RelationCategory parse_relation_category(std::string_view tag);

struct RelationType {
  std::string label;
  RelationCategory category = RelationCategory::kCommonSense;

  friend auto operator<=>(const RelationType&, const RelationType&) = default;
};

// Strips a "/r/" prefix; throws kMalformedLine if the label ends up empty
// or contains whitespace.
std::string normalize_relation_label(std::string_view raw);

}  // namespace kgzsl::kg

#endif  // KGZSL_KG_CONCEPT_H_
