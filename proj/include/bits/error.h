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

#ifndef BITS_ERROR_H_
#define BITS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bits {

// Broad failure classes. Each maps to a distinct process exit status.
enum class ErrorClass {
  kConfig = 2,
  kData = 3,
  kScorer = 4,
  kStats = 5,
};

enum class ErrorCode {
  // Configuration.
  kConfig,
  kUsage,
  // Input data.
  kParse,
  kMissingGroupSlot,
  kMultipleSlots,
  kUnknownPlaceholder,
  kRealizationFailure,
  kDuplicateTemplateId,
  kInvalidLexicon,
  kIdCollision,
  kOverlappingSpans,
  kEmptyCollection,
  kMissingStageOutput,
  kEmptyCell,
  kInconsistentInputs,
  // Scorers.
  kProtocolViolation,
  kIdMismatch,
  kMissingResponse,
  kNonFiniteScore,
  kBackendError,
  kTransport,
  // Statistics.
  kSingleLevelFactor,
  kRankDeficient,
  kDegenerateVariance,
  kInsufficientRows,
  kInvalidFrame,
  kEmptyGroup,
};

ErrorClass ClassOf(ErrorCode code);
std::string_view CodeName(ErrorCode code);

// All recoverable failures in the library are reported with this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const { return code_; }
  ErrorClass error_class() const { return ClassOf(code_); }
  int exit_status() const { return static_cast<int>(error_class()); }

 private:
  ErrorCode code_;
};

}  // namespace bits

#endif  // BITS_ERROR_H_
