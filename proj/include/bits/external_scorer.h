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

#ifndef BITS_EXTERNAL_SCORER_H_
#define BITS_EXTERNAL_SCORER_H_

#include <string>
#include <string_view>
#include <vector>

#include "bits/scoring.h"

namespace bits {

// Wire protocol, one UTF-8 JSON object per line:
//   request  {"id": "...", "text": "..."}
//   response {"id": "...", "score": <number>}
//            {"id": "...", "error": "..."}   per-sentence backend failure
// Responses within a batch may arrive in any order; ids carry the join.

struct ScoreRequest {
  std::string id;
  std::string text;
};

struct WireResponse {
  std::string id;
  double score = 0.0;
};

std::string EncodeRequest(const ScoreRequest &request);
// Throws kProtocolViolation for malformed lines and kBackendError for
// error records.
WireResponse DecodeResponse(std::string_view line);

// Scores `sentences` through the endpoint's transport and returns one
// standardized record per sentence, in input order. Up to
// endpoint.workers batches are in flight at once, each worker owning one
// adapter process. `clamped`, when given, receives the number of raw
// scores clamped into the native range.
//
// Throws kProtocolViolation, kIdMismatch, kMissingResponse,
// kNonFiniteScore, kBackendError or kTransport.
std::vector<ScoreRecord> ScoreWithExternal(const std::vector<ScoreRequest> &sentences,
                                           const ScorerDescriptor &desc,
                                           const ScorerEndpoint &endpoint,
                                           size_t *clamped = nullptr);

// Built-in transport, for symmetry with ScoreWithExternal.
std::vector<ScoreRecord> ScoreWithBuiltin(const std::vector<ScoreRequest> &sentences,
                                          const ScorerDescriptor &desc,
                                          const ValenceLexicon &lexicon,
                                          size_t *clamped = nullptr);

}  // namespace bits

#endif  // BITS_EXTERNAL_SCORER_H_
