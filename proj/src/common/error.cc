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

#include "kgzsl/common/error.h"

namespace kgzsl {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "Usage";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kEmptyConcept: return "EmptyConcept";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnknownConcept: return "UnknownConcept";
    case ErrorCode::kNoCommonSubsumer: return "NoCommonSubsumer";
    case ErrorCode::kInvalidPolicy: return "InvalidPolicy";
    case ErrorCode::kEmptySeedSet: return "EmptySeedSet";
    case ErrorCode::kUnresolvableSeed: return "UnresolvableSeed";
    case ErrorCode::kSeedConflict: return "SeedConflict";
    case ErrorCode::kUnknownMappingTarget: return "UnknownMappingTarget";
    case ErrorCode::kTooFewAnchors: return "TooFewAnchors";
    case ErrorCode::kAnchorNotInGraph: return "AnchorNotInGraph";
    case ErrorCode::kMissingMappingTarget: return "MissingMappingTarget";
    case ErrorCode::kMissingClassEmbedding: return "MissingClassEmbedding";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kEmptyTrainSplit: return "EmptyTrainSplit";
    case ErrorCode::kUnseenLabelInTrain: return "UnseenLabelInTrain";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kDegeneratePartition: return "DegeneratePartition";
    case ErrorCode::kInvalidDataset: return "InvalidDataset";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kUntrackedParameter: return "UntrackedParameter";
    case ErrorCode::kDivergedLoss: return "DivergedLoss";
    case ErrorCode::kMetricBounds: return "MetricBounds";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kConfig:
      return ErrorCategory::kUsage;
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kNonFiniteInput:
    case ErrorCode::kUntrackedParameter:
    case ErrorCode::kDivergedLoss:
    case ErrorCode::kMetricBounds:
      return ErrorCategory::kNumeric;
    default:
      return ErrorCategory::kData;
  }
}

}  // namespace kgzsl
