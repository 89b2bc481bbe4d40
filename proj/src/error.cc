// Copyright 2026 The BITS Audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bits/error.h"

namespace bits {

ErrorClass ClassOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kUsage:
      return ErrorClass::kConfig;
    case ErrorCode::kProtocolViolation:
    case ErrorCode::kIdMismatch:
    case ErrorCode::kMissingResponse:
    case ErrorCode::kNonFiniteScore:
    case ErrorCode::kBackendError:
    case ErrorCode::kTransport:
      return ErrorClass::kScorer;
    case ErrorCode::kSingleLevelFactor:
    case ErrorCode::kRankDeficient:
    case ErrorCode::kDegenerateVariance:
    case ErrorCode::kInsufficientRows:
    case ErrorCode::kInvalidFrame:
    case ErrorCode::kEmptyGroup:
      return ErrorClass::kStats;
    default:
      return ErrorClass::kData;
  }
}

std::string_view CodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kMissingGroupSlot: return "MissingGroupSlot";
    case ErrorCode::kMultipleSlots: return "MultipleSlots";
    case ErrorCode::kUnknownPlaceholder: return "UnknownPlaceholder";
    case ErrorCode::kRealizationFailure: return "RealizationFailure";
    case ErrorCode::kDuplicateTemplateId: return "DuplicateTemplateId";
    case ErrorCode::kInvalidLexicon: return "InvalidLexicon";
    case ErrorCode::kIdCollision: return "IdCollision";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kEmptyCollection: return "EmptyCollection";
    case ErrorCode::kMissingStageOutput: return "MissingStageOutput";
    case ErrorCode::kEmptyCell: return "EmptyCell";
    case ErrorCode::kInconsistentInputs: return "InconsistentInputs";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kMissingResponse: return "MissingResponse";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kBackendError: return "BackendError";
    case ErrorCode::kTransport: return "TransportError";
    case ErrorCode::kSingleLevelFactor: return "SingleLevelFactor";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kInsufficientRows: return "InsufficientRows";
    case ErrorCode::kInvalidFrame: return "InvalidFrame";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(CodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace bits
