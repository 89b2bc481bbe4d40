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

#include "bits/template.h"

#include <algorithm>

#include "bits/error.h"
#include "bits/text_util.h"

namespace bits {

std::string_view SlotKindName(SlotKind kind) {
  switch (kind) {
    case SlotKind::kNone: return "none";
    case SlotKind::kEmotional: return "emotional";
    case SlotKind::kEvent: return "event";
  }
  return "none";
}

SlotKind ParseSlotKind(std::string_view name) {
  if (name == "none") return SlotKind::kNone;
  if (name == "emotional") return SlotKind::kEmotional;
  if (name == "event") return SlotKind::kEvent;
  throw Error(ErrorCode::kParse, "unknown slot kind '" + std::string(name) + "'");
}

std::string_view RealizationModeName(RealizationMode mode) {
  return mode == RealizationMode::kPeopleFirst ? "people_first" : "attributive";
}

RealizationMode ParseRealizationMode(std::string_view name) {
  if (name == "attributive") return RealizationMode::kAttributive;
  if (name == "people_first") return RealizationMode::kPeopleFirst;
  throw Error(ErrorCode::kInvalidLexicon,
              "unknown realization mode '" + std::string(name) + "'");
}

std::string_view TermCasingName(TermCasing casing) {
  return casing == TermCasing::kLower ? "lower" : "verbatim";
}

TermCasing ParseTermCasing(std::string_view name) {
  if (name == "verbatim") return TermCasing::kVerbatim;
  if (name == "lower") return TermCasing::kLower;
  throw Error(ErrorCode::kInvalidLexicon,
              "unknown casing '" + std::string(name) + "'");
}

Template ParseTemplate(std::string_view raw, std::string_view id) {
  if (Trim(raw).empty()) {
    throw Error(ErrorCode::kParse, "template " + std::string(id) + " is empty");
  }
  int groups = 0, emotional = 0, events = 0;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '>') {
      throw Error(ErrorCode::kUnknownPlaceholder,
                  "stray '>' in template " + std::string(id));
    }
    if (raw[i] != '<') continue;
    size_t close = raw.find('>', i);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kUnknownPlaceholder,
                  "unterminated '<' in template " + std::string(id));
    }
    std::string_view tag = raw.substr(i, close - i + 1);
    if (tag == kGroupTag) {
      ++groups;
    } else if (tag == kEmotionalTag) {
      ++emotional;
    } else if (tag == kEventTag) {
      ++events;
    } else {
      throw Error(ErrorCode::kUnknownPlaceholder,
                  "unknown placeholder " + std::string(tag) + " in template " +
                      std::string(id));
    }
    i = close;
  }
  if (groups > 1 || emotional > 1 || events > 1 || (emotional && events)) {
    throw Error(ErrorCode::kMultipleSlots,
                "template " + std::string(id) + " has more than one slot of a kind");
  }
  if (groups == 0) {
    throw Error(ErrorCode::kMissingGroupSlot,
                "template " + std::string(id) + " has no <group> slot");
  }
  Template t;
  t.id = std::string(id);
  t.body = std::string(raw);
  if (emotional) {
    t.kind = TemplateKind::kSentiment;
    t.slot = SlotKind::kEmotional;
  } else if (events) {
    t.kind = TemplateKind::kSentiment;
    t.slot = SlotKind::kEvent;
  }
  return t;
}

std::vector<Template> LoadTemplates(const std::filesystem::path &path) {
  std::vector<Template> out;
  for (const auto &row : ReadTsv(path)) {
    if (row.fields.size() != 2) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(row.line) +
                                         ": expected 'id<TAB>body'");
    }
    out.push_back(ParseTemplate(row.fields[1], row.fields[0]));
  }
  return out;
}

ArticleRules::ArticleRules(std::vector<std::pair<std::string, std::string>> exceptions)
    : exceptions_(std::move(exceptions)) {
  for (auto &[prefix, article] : exceptions_) {
    prefix = AsciiLower(prefix);
    article = AsciiLower(article);
    if (prefix.empty() || (article != "a" && article != "an")) {
      throw Error(ErrorCode::kParse, "invalid article exception '" + prefix + "'");
    }
  }
  std::stable_sort(exceptions_.begin(), exceptions_.end(),
                   [](const auto &x, const auto &y) {
                     return x.first.size() > y.first.size();
                   });
}

ArticleRules ArticleRules::Load(const std::filesystem::path &path) {
  std::vector<std::pair<std::string, std::string>> exceptions;
  for (const auto &row : ReadTsv(path)) {
    if (row.fields.size() != 2) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(row.line) +
                                         ": expected 'prefix<TAB>article'");
    }
    exceptions.emplace_back(row.fields[0], row.fields[1]);
  }
  return ArticleRules(std::move(exceptions));
}

std::string_view ArticleRules::ArticleFor(std::string_view next_word) const {
  std::string word = AsciiLower(next_word);
  for (const auto &[prefix, article] : exceptions_) {
    if (word.compare(0, prefix.size(), prefix) == 0) {
      return article == "an" ? "an" : "a";
    }
  }
  if (word.empty()) return "a";
  switch (word[0]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return "an";
    default:
      return "a";
  }
}

namespace {

bool IsHeadChar(char c) { return IsAsciiAlpha(c) || c == '-' || c == '\''; }

std::string CasedTerm(const TermForm &term) {
  return term.casing == TermCasing::kLower ? AsciiLower(term.text) : term.text;
}

// Rewrites an "a"/"an" token directly preceding position `p` to agree
// with the word starting at `p`.
void FixArticle(std::string &out, size_t p, const ArticleRules &rules) {
  if (p < 2 || out[p - 1] != ' ') return;
  size_t end = p - 1;
  size_t begin = end;
  while (begin > 0 && IsAsciiAlpha(out[begin - 1])) --begin;
  if (begin == end) return;
  std::string_view word(out.data() + begin, end - begin);
  std::string lower = AsciiLower(word);
  if (lower != "a" && lower != "an") return;
  size_t next_end = p;
  while (next_end < out.size() && IsHeadChar(out[next_end])) ++next_end;
  std::string article(rules.ArticleFor(std::string_view(out).substr(p, next_end - p)));
  if (word[0] == 'A') article[0] = 'A';
  out.replace(begin, end - begin, article);
}

}  // namespace

std::string Realize(const Template &tpl, const TermForm &term,
                    std::optional<std::string_view> slot_word,
                    const ArticleRules &rules) {
  const bool wants_slot = tpl.kind == TemplateKind::kSentiment;
  if (wants_slot != slot_word.has_value()) {
    throw Error(ErrorCode::kRealizationFailure,
                "template " + tpl.id + (wants_slot ? " requires" : " takes no") +
                    " slot word");
  }
  const std::string_view body = tpl.body;
  const std::string_view slot_tag =
      tpl.slot == SlotKind::kEmotional ? kEmotionalTag : kEventTag;
  const std::string cased = CasedTerm(term);

  std::string out;
  out.reserve(body.size() + cased.size() + 32);
  std::vector<size_t> phrase_starts;
  size_t i = 0;
  while (i < body.size()) {
    if (body.compare(i, kGroupTag.size(), kGroupTag) == 0) {
      i += kGroupTag.size();
      phrase_starts.push_back(out.size());
      if (term.mode == RealizationMode::kAttributive) {
        out += cased;
        continue;
      }
      size_t head_begin = i + 1;
      size_t head_end = head_begin;
      if (i < body.size() && body[i] == ' ') {
        while (head_end < body.size() && IsHeadChar(body[head_end])) ++head_end;
      }
      if (head_end == head_begin) {
        throw Error(ErrorCode::kRealizationFailure,
                    "template " + tpl.id + ": no head noun after <group> for '" +
                        term.text + "'");
      }
      out.append(body.substr(head_begin, head_end - head_begin));
      out += " with ";
      out += cased;
      i = head_end;
    } else if (wants_slot && body.compare(i, slot_tag.size(), slot_tag) == 0) {
      i += slot_tag.size();
      phrase_starts.push_back(out.size());
      out.append(*slot_word);
    } else {
      out += body[i++];
    }
  }
  std::sort(phrase_starts.rbegin(), phrase_starts.rend());
  for (size_t p : phrase_starts) FixArticle(out, p, rules);
  if (!out.empty() && !phrase_starts.empty() && phrase_starts.back() == 0) {
    out[0] = AsciiToUpper(out[0]);
  }
  return out;
}

}  // namespace bits
