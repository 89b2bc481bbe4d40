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

#include "bits/lexicon.h"

#include <algorithm>
#include <map>
#include <set>

#include "bits/error.h"
#include "bits/text_util.h"

namespace bits {

namespace {

template <size_t N>
bool RankedLess(const std::string_view (&known)[N], std::string_view a,
                std::string_view b) {
  auto rank = [&](std::string_view s) {
    return static_cast<size_t>(std::find(known, known + N, s) - known);
  };
  size_t ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  return ra == N && a < b;
}

std::string Where(const std::filesystem::path &path, int line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

std::vector<std::string> SplitWords(std::string_view list) {
  std::vector<std::string> words;
  for (auto &w : Split(list, ',')) {
    std::string_view t = Trim(w);
    if (!t.empty()) words.emplace_back(t);
  }
  return words;
}

}  // namespace

bool GroupLess(std::string_view a, std::string_view b) {
  return RankedLess(kCanonicalGroups, a, b);
}

bool EmotionLess(std::string_view a, std::string_view b) {
  return RankedLess(kCanonicalEmotions, a, b);
}

std::vector<GroupLexicon> LoadGroupLexicons(const std::filesystem::path &path) {
  // group -> position -> term
  std::map<std::string, std::map<int, TermForm>> table;
  for (const auto &row : ReadTsv(path)) {
    if (row.fields.size() != 5) {
      throw Error(ErrorCode::kParse,
                  Where(path, row.line) +
                      "expected 'group<TAB>position<TAB>term<TAB>realization<TAB>casing'");
    }
    int position = 0;
    try {
      position = std::stoi(row.fields[1]);
    } catch (const std::exception &) {
      throw Error(ErrorCode::kParse, Where(path, row.line) + "bad position");
    }
    TermForm term{row.fields[2], ParseRealizationMode(row.fields[3]),
                  ParseTermCasing(row.fields[4])};
    if (row.fields[0].empty() || term.text.empty()) {
      throw Error(ErrorCode::kInvalidLexicon, Where(path, row.line) + "empty field");
    }
    auto [it, inserted] = table[row.fields[0]].emplace(position, std::move(term));
    if (!inserted) {
      throw Error(ErrorCode::kInvalidLexicon,
                  Where(path, row.line) + "duplicate position in group " + row.fields[0]);
    }
  }
  std::vector<GroupLexicon> groups;
  for (auto &[label, terms] : table) {
    GroupLexicon g{label, {}};
    for (auto &[pos, term] : terms) g.terms.push_back(std::move(term));
    groups.push_back(std::move(g));
  }
  groups = SortedGroups(std::move(groups));
  ValidateGroups(groups);
  return groups;
}

std::vector<EmotionLexicon> LoadEmotionLexicons(const std::filesystem::path &path) {
  std::vector<EmotionLexicon> emotions;
  for (const auto &row : ReadTsv(path)) {
    if (row.fields.size() != 3) {
      throw Error(ErrorCode::kParse,
                  Where(path, row.line) +
                      "expected 'emotion<TAB>emotional words<TAB>event words'");
    }
    emotions.push_back(
        {row.fields[0], SplitWords(row.fields[1]), SplitWords(row.fields[2])});
  }
  emotions = SortedEmotions(std::move(emotions));
  ValidateEmotions(emotions);
  return emotions;
}

void ValidateGroups(const std::vector<GroupLexicon> &groups) {
  if (groups.empty()) throw Error(ErrorCode::kInvalidLexicon, "no groups");
  std::set<std::string> labels;
  std::map<std::string, std::string> owner;  // lowercase term -> group
  for (const auto &g : groups) {
    if (!labels.insert(g.group).second) {
      throw Error(ErrorCode::kInvalidLexicon, "duplicate group " + g.group);
    }
    if (g.terms.empty()) {
      throw Error(ErrorCode::kInvalidLexicon, "group " + g.group + " has no terms");
    }
    for (const auto &t : g.terms) {
      if (t.text.find_first_of("<>\t\n") != std::string::npos) {
        throw Error(ErrorCode::kInvalidLexicon, "illegal character in term " + t.text);
      }
      auto [it, inserted] = owner.emplace(AsciiLower(t.text), g.group);
      if (!inserted) {
        throw Error(ErrorCode::kInvalidLexicon,
                    "term '" + t.text + "' in " + g.group + " already used by " +
                        it->second);
      }
    }
  }
}

void ValidateEmotions(const std::vector<EmotionLexicon> &emotions) {
  std::set<std::string> labels;
  for (const auto &e : emotions) {
    if (!labels.insert(e.emotion).second) {
      throw Error(ErrorCode::kInvalidLexicon, "duplicate emotion " + e.emotion);
    }
    if (e.emotional_words.empty() || e.event_words.empty()) {
      throw Error(ErrorCode::kInvalidLexicon, "emotion " + e.emotion + " lacks words");
    }
    for (const auto *list : {&e.emotional_words, &e.event_words}) {
      for (const auto &w : *list) {
        if (w.find_first_of("<>\t\n") != std::string::npos) {
          throw Error(ErrorCode::kInvalidLexicon, "illegal character in word " + w);
        }
      }
    }
  }
}

std::vector<GroupLexicon> SortedGroups(std::vector<GroupLexicon> groups) {
  std::stable_sort(groups.begin(), groups.end(), [](const auto &a, const auto &b) {
    return GroupLess(a.group, b.group);
  });
  return groups;
}

std::vector<EmotionLexicon> SortedEmotions(std::vector<EmotionLexicon> emotions) {
  std::stable_sort(emotions.begin(), emotions.end(), [](const auto &a, const auto &b) {
    return EmotionLess(a.emotion, b.emotion);
  });
  return emotions;
}

size_t TotalTerms(const std::vector<GroupLexicon> &groups) {
  size_t n = 0;
  for (const auto &g : groups) n += g.terms.size();
  return n;
}

}  // namespace bits
