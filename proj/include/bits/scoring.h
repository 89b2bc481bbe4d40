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

#ifndef BITS_SCORING_H_
#define BITS_SCORING_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bits {

enum class ScorerKind { kSentiment, kToxicity };
enum class Transport { kBuiltin, kExternalProcess, kFileBatch };

std::string_view ScorerKindName(ScorerKind kind);
std::string_view TransportName(Transport transport);

struct ScorerDescriptor {
  std::string name;
  ScorerKind kind = ScorerKind::kSentiment;
  double native_lo = -1.0;
  double native_hi = 1.0;
  Transport transport = Transport::kBuiltin;
};

// Throws kConfig unless lo < hi (both finite) and the name is non-empty.
void ValidateDescriptor(const ScorerDescriptor &desc);

struct ScoreRecord {
  std::string sentence_id;
  std::string scorer_name;
  double raw = 0.0;
  double standardized = 0.0;

  bool operator==(const ScoreRecord &) const = default;
};

// Maps a native score onto the common scale: sentiment affinely onto
// [-1, +1], toxicity onto [-1, 0] with the native maximum at -1.
// Out-of-range input is clamped and reported through `clamped`.
// Throws kNonFiniteScore.
double Standardize(double raw, const ScorerDescriptor &desc, bool *clamped = nullptr);

struct ValenceLexicon {
  std::unordered_map<std::string, double> entries;  // lowercase token -> valence
  std::set<std::string> negators;
  int negation_window = 3;

  // {"negation_window": n, "negators": [...], "entries": {token: valence}}
  static ValenceLexicon Load(const std::filesystem::path &path);
  static ValenceLexicon FromJson(std::string_view json);
  // Throws kConfig: valences must be finite and in [-1, 1], window >= 1,
  // negators disjoint from entries.
  void Validate() const;
};

// Lowercased tokens split on anything other than letters, digits and
// inner apostrophes.
std::vector<std::string> Tokenize(std::string_view text);

// Mean valence of matched tokens, sign flipped for tokens preceded by a
// negator within the window; clamped to [-1, 1]; 0 without matches.
double ScoreBuiltin(std::string_view text, const ValenceLexicon &lexicon);

// Transport settings for one registered scorer.
struct ScorerEndpoint {
  std::vector<std::string> command;    // external_process
  std::filesystem::path request_file;  // file_batch
  std::filesystem::path response_file;
  std::filesystem::path lexicon;       // builtin
  size_t batch_size = 64;
  int timeout_ms = 30000;
  int workers = 1;
};

struct RegisteredScorer {
  ScorerDescriptor descriptor;
  ScorerEndpoint endpoint;
};

// Parses a JSON array of scorer entries. Relative paths are resolved
// against `base_dir`. Throws kConfig on invalid or duplicate entries.
std::vector<RegisteredScorer> ParseRegistry(std::string_view json,
                                            const std::filesystem::path &base_dir);

std::string SerializeScores(const std::vector<ScoreRecord> &records);
std::vector<ScoreRecord> ParseScores(std::string_view content, std::string_view origin);
std::vector<ScoreRecord> ReadScores(const std::filesystem::path &path);

}  // namespace bits

#endif  // BITS_SCORING_H_
