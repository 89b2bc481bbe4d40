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

#ifndef BITS_CORPUS_H_
#define BITS_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bits/lexicon.h"
#include "bits/template.h"

namespace bits {

// One realized probe together with the provenance needed to analyze it.
// For comparative records read back from a perturbation file
// `template_id` holds the source document id.
struct ProbeSentence {
  std::string id;
  std::string text;
  std::string template_id;
  std::string group;
  std::string group_term;
  std::optional<std::string> emotion;
  std::optional<std::string> slot_word;
  SlotKind slot_kind = SlotKind::kNone;

  bool operator==(const ProbeSentence &) const = default;
};

// Content hash of the provenance tuple; identical inputs give identical ids.
std::string SentenceId(std::string_view template_id, std::string_view group,
                       std::string_view term, std::string_view emotion,
                       std::string_view word);

struct CorpusConfig {
  ArticleRules articles;
};

// All realizations of one template in canonical order: group, term,
// emotion, word. The order of `groups` and `emotions` does not matter.
std::vector<ProbeSentence> ExpandTemplate(const Template &tpl,
                                          const std::vector<GroupLexicon> &groups,
                                          const std::vector<EmotionLexicon> &emotions,
                                          const CorpusConfig &config = {});

// Concatenates ExpandTemplate over `templates` in the given order.
// Throws kDuplicateTemplateId and kIdCollision.
std::vector<ProbeSentence> GenerateCorpus(const std::vector<Template> &templates,
                                          const std::vector<GroupLexicon> &groups,
                                          const std::vector<EmotionLexicon> &emotions,
                                          const CorpusConfig &config = {});

// Record-per-line JSON. Field order: id, template_id, group, group_term,
// emotion, slot_kind, slot_word, text. Absent optionals are null.
std::string SerializeCorpus(const std::vector<ProbeSentence> &corpus);

struct ProbeFile {
  std::vector<ProbeSentence> records;
  bool comparative = false;  // records came from a perturbation file
};

// Parses either a probe corpus or a comparative corpus. Throws kParse on
// malformed lines and kIdCollision on duplicate ids.
ProbeFile ParseProbeRecords(std::string_view content, std::string_view origin);
ProbeFile ReadProbeFile(const std::filesystem::path &path);

}  // namespace bits

#endif  // BITS_CORPUS_H_
