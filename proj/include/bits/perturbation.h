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

#ifndef BITS_PERTURBATION_H_
#define BITS_PERTURBATION_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bits/lexicon.h"

namespace bits {

struct SourceDocument {
  std::string id;
  std::string platform;
  std::string text;
};

// Target surface forms are matched case-insensitively at word
// boundaries. A target beginning with '#' matches the whole hashtag.
class PerturbationRule {
 public:
  PerturbationRule();  // "disability", "disabled", "#disability"
  explicit PerturbationRule(std::vector<std::string> targets);

  const std::vector<std::string> &targets() const { return targets_; }

 private:
  std::vector<std::string> targets_;  // lowercase, longest first
};

// Half-open byte range [begin, end) into the source text.
struct Span {
  size_t begin = 0;
  size_t end = 0;
  bool operator==(const Span &) const = default;
};

std::vector<Span> FindTargets(std::string_view text, const PerturbationRule &rule);

// Replaces every span with `replacement`. In hashtag position (the span
// starts with '#' or follows one) internal spaces are dropped and a
// single '#' is kept. Throws kOverlappingSpans for unsorted, overlapping
// or out-of-range spans.
std::string PerturbDocument(const SourceDocument &doc, const std::vector<Span> &spans,
                            std::string_view replacement);

struct ComparativeRecord {
  std::string id;
  std::string source_id;
  std::string group;
  std::string group_term;
  std::string text;
  size_t n_substitutions = 0;
};

struct ComparativeCorpus {
  std::vector<ComparativeRecord> records;
  size_t matched_documents = 0;
  size_t skipped_documents = 0;
};

// One record per (matching document, group term) in document order then
// canonical group/term order. Throws kEmptyCollection when nothing
// matches.
ComparativeCorpus BuildComparativeCorpus(const std::vector<SourceDocument> &docs,
                                         const PerturbationRule &rule,
                                         const std::vector<GroupLexicon> &groups);

// Record-per-line JSON with fields id, platform, text.
std::vector<SourceDocument> ParseSourceDocuments(std::string_view content,
                                                 std::string_view origin);
std::vector<SourceDocument> ReadSourceDocuments(const std::filesystem::path &path);

// Same layout as the probe corpus with source_id in place of
// template_id, empty slot fields and a trailing n_substitutions.
std::string SerializeComparative(const std::vector<ComparativeRecord> &records);

}  // namespace bits

#endif  // BITS_PERTURBATION_H_
