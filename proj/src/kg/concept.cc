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

#include "kgzsl/kg/concept.h"

#include <cctype>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::kg {

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

ConceptId::ConceptId(std::string normalized) : name_(std::move(normalized)) {
  if (name_.empty()) throw Error(ErrorCode::kEmptyConcept, "empty concept");
  for (char c : name_) {
    if (is_space(c) || std::isupper(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::kMalformedLine,
                  "concept '" + name_ + "' is not normalized");
    }
  }
}

std::optional<std::string> concept_language(std::string_view raw) {
  raw = trim(raw);
  if (raw.substr(0, 3) != "/c/") return std::nullopt;
  const auto rest = raw.substr(3);
  const auto slash = rest.find('/');
  if (slash == std::string_view::npos) return std::string(rest);
  return std::string(rest.substr(0, slash));
}

ConceptId normalize_concept(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.substr(0, 3) == "/c/") {
    s.remove_prefix(3);
    const auto lang_end = s.find('/');
    s = lang_end == std::string_view::npos ? std::string_view{}
                                           : s.substr(lang_end + 1);
    // ConceptNet URIs may carry a part-of-speech suffix: /c/en/dog/n.
    const auto tail = s.find('/');
    if (tail != std::string_view::npos) s = s.substr(0, tail);
    s = trim(s);
  }
  std::string out;
  out.reserve(s.size());
  bool in_space = false;
  for (char c : s) {
    if (is_space(c)) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back('_');
    in_space = false;
    out.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyConcept,
                "concept '" + std::string(raw) + "' normalizes to nothing");
  }
  return ConceptId(std::move(out));
}

std::string_view relation_category_tag(RelationCategory c) {
  return c == RelationCategory::kCommonSense ? "CS" : "LX";
}

RelationCategory parse_relation_category(std::string_view tag) {
  if (tag == "CS") return RelationCategory::kCommonSense;
  if (tag == "LX") return RelationCategory::kLexicographic;
  throw Error(ErrorCode::kMalformedLine,
              "unknown relation category '" + std::string(tag) + "'");
}

std::string normalize_relation_label(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.substr(0, 3) == "/r/") s.remove_prefix(3);
  if (s.empty()) throw Error(ErrorCode::kMalformedLine, "empty relation");
  for (char c : s) {
    if (is_space(c)) {
      throw Error(ErrorCode::kMalformedLine,
                  "relation '" + std::string(s) + "' contains whitespace");
    }
  }
  return std::string(s);
}

}  // namespace kgzsl::kg
