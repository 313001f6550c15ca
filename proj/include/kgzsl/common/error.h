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

#ifndef KGZSL_COMMON_ERROR_H_
#define KGZSL_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgzsl {

// Every failure raised by the library carries one of these codes. The CLI
// maps them onto process exit codes through error_category().
enum class ErrorCode {
  // Usage / configuration.
  kUsage,
  kConfig,
  // Data errors.
  kIo,
  kEmptyConcept,
  kMalformedLine,
  kNegativeWeight,
  kSelfLoop,
  kCycleDetected,
  kUnknownConcept,
  kNoCommonSubsumer,
  kInvalidPolicy,
  kEmptySeedSet,
  kUnresolvableSeed,
  kSeedConflict,
  kUnknownMappingTarget,
  kTooFewAnchors,
  kAnchorNotInGraph,
  kMissingMappingTarget,
  kMissingClassEmbedding,
  kDimMismatch,
  kEmptyTrainSplit,
  kUnseenLabelInTrain,
  kEmptyGroup,
  kDegeneratePartition,
  kInvalidDataset,
  // Numeric failures.
  kShapeMismatch,
  kNonFiniteInput,
  kUntrackedParameter,
  kDivergedLoss,
  kMetricBounds,
};

enum class ErrorCategory { kUsage = 1, kData = 2, kNumeric = 3 };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error(kShapeMismatch) with `what` when `ok` is false.
inline void check_shape(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kShapeMismatch, what);
}

}  // namespace kgzsl

#endif  // KGZSL_COMMON_ERROR_H_
