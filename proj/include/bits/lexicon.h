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

#ifndef BITS_LEXICON_H_
#define BITS_LEXICON_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bits/template.h"

namespace bits {

// Group labels of the disability facet, in canonical order.
inline constexpr std::string_view kCanonicalGroups[] = {"DSBL", "DSBL_S", "NDSBL",
                                                        "NRMA"};
inline constexpr std::string_view kReferenceGroup = "NRMA";

inline constexpr std::string_view kCanonicalEmotions[] = {
    "Anger", "Disgust", "Fear", "Happy", "Sad", "SurprisePos", "SurpriseNeg"};

// Known labels first in canonical order, then unknown labels
// lexicographically. Used for every group/emotion ordering decision.
bool GroupLess(std::string_view a, std::string_view b);
bool EmotionLess(std::string_view a, std::string_view b);

struct GroupLexicon {
  std::string group;
  std::vector<TermForm> terms;  // in position order
};

struct EmotionLexicon {
  std::string emotion;
  std::vector<std::string> emotional_words;
  std::vector<std::string> event_words;

  const std::vector<std::string> &WordsFor(SlotKind slot) const {
    return slot == SlotKind::kEvent ? event_words : emotional_words;
  }
};

// Group file rows: group, position, term, realization, casing. The
// result is sorted canonically regardless of row order.
std::vector<GroupLexicon> LoadGroupLexicons(const std::filesystem::path &path);
// Emotion file rows: emotion, comma-separated emotional words,
// comma-separated event words.
std::vector<EmotionLexicon> LoadEmotionLexicons(const std::filesystem::path &path);

// Throws kInvalidLexicon on empty groups, duplicate terms within a group,
// or a term shared by two groups (compared case-insensitively).
void ValidateGroups(const std::vector<GroupLexicon> &groups);
void ValidateEmotions(const std::vector<EmotionLexicon> &emotions);

std::vector<GroupLexicon> SortedGroups(std::vector<GroupLexicon> groups);
std::vector<EmotionLexicon> SortedEmotions(std::vector<EmotionLexicon> emotions);

size_t TotalTerms(const std::vector<GroupLexicon> &groups);

}  // namespace bits

#endif  // BITS_LEXICON_H_
