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

#ifndef BITS_TEMPLATE_H_
#define BITS_TEMPLATE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bits {

// Placeholder tokens recognized in template bodies.
inline constexpr std::string_view kGroupTag = "<group>";
inline constexpr std::string_view kEmotionalTag = "<emotional word>";
inline constexpr std::string_view kEventTag = "<event word>";

enum class TemplateKind { kNeutral, kSentiment };
enum class SlotKind { kNone, kEmotional, kEvent };

std::string_view SlotKindName(SlotKind kind);
SlotKind ParseSlotKind(std::string_view name);

// A sentence skeleton with exactly one group slot and at most one
// sentiment slot. Only parse_template() produces valid instances.
struct Template {
  std::string id;
  std::string body;
  TemplateKind kind = TemplateKind::kNeutral;
  SlotKind slot = SlotKind::kNone;
};

// Classifies `raw` by the placeholders it contains. Throws Error with
// kMissingGroupSlot, kMultipleSlots or kUnknownPlaceholder.
Template ParseTemplate(std::string_view raw, std::string_view id);

// Reads "id<TAB>body" records.
std::vector<Template> LoadTemplates(const std::filesystem::path &path);

enum class RealizationMode {
  kAttributive,  // "the Deaf neighbour"
  kPeopleFirst,  // "the neighbour with Visual Impairment"
};
enum class TermCasing {
  kVerbatim,
  kLower,  // lowercased; capitalized only at sentence start
};

std::string_view RealizationModeName(RealizationMode mode);
RealizationMode ParseRealizationMode(std::string_view name);
std::string_view TermCasingName(TermCasing casing);
TermCasing ParseTermCasing(std::string_view name);

struct TermForm {
  std::string text;
  RealizationMode mode = RealizationMode::kAttributive;
  TermCasing casing = TermCasing::kVerbatim;
};

// Chooses "a" or "an" for the word that follows an indefinite article.
// The default rule is "an" before a leading vowel letter; exceptions are
// matched by longest lowercase prefix.
class ArticleRules {
 public:
  ArticleRules() = default;
  explicit ArticleRules(std::vector<std::pair<std::string, std::string>> exceptions);

  static ArticleRules Load(const std::filesystem::path &path);

  // Returns "a" or "an" (lowercase).
  std::string_view ArticleFor(std::string_view next_word) const;

 private:
  // (lowercase prefix, article), sorted by descending prefix length.
  std::vector<std::pair<std::string, std::string>> exceptions_;
};

// Substitutes every placeholder. `slot_word` must be given iff the
// template is of sentiment kind. Throws kRealizationFailure when a
// people-first term has no following head noun to attach to.
std::string Realize(const Template &tpl, const TermForm &term,
                    std::optional<std::string_view> slot_word,
                    const ArticleRules &rules = ArticleRules());

}  // namespace bits

#endif  // BITS_TEMPLATE_H_
