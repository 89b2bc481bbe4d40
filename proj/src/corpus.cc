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

#include "bits/corpus.h"

#include <set>
#include <sstream>

#include "bits/error.h"
#include "bits/text_util.h"
#include "json.hpp"

namespace bits {

using ordered_json = nlohmann::ordered_json;

std::string SentenceId(std::string_view template_id, std::string_view group,
                       std::string_view term, std::string_view emotion,
                       std::string_view word) {
  std::string key;
  for (std::string_view part : {template_id, group, term, emotion, word}) {
    key.append(part);
    key.push_back('\x1f');
  }
  return HexId('s', Fnv1a64(key));
}

std::vector<ProbeSentence> ExpandTemplate(const Template &tpl,
                                          const std::vector<GroupLexicon> &groups,
                                          const std::vector<EmotionLexicon> &emotions,
                                          const CorpusConfig &config) {
  const auto sorted_groups = SortedGroups(groups);
  const auto sorted_emotions = SortedEmotions(emotions);
  const bool sentiment = tpl.kind == TemplateKind::kSentiment;
  if (sentiment && sorted_emotions.empty()) {
    throw Error(ErrorCode::kInvalidLexicon,
                "template " + tpl.id + " needs emotion lexicons");
  }

  std::vector<ProbeSentence> out;
  for (const auto &g : sorted_groups) {
    for (const auto &term : g.terms) {
      auto emit = [&](const std::string *emotion, const std::string *word) {
        ProbeSentence s;
        try {
          s.text = Realize(tpl, term,
                           word ? std::optional<std::string_view>(*word) : std::nullopt,
                           config.articles);
        } catch (const Error &e) {
          throw Error(e.code(), std::string(e.what()) + " [template " + tpl.id +
                                    ", group " + g.group + ", term '" + term.text +
                                    "'" + (word ? ", word '" + *word + "'" : "") + "]");
        }
        s.template_id = tpl.id;
        s.group = g.group;
        s.group_term = term.text;
        s.slot_kind = tpl.slot;
        if (emotion) s.emotion = *emotion;
        if (word) s.slot_word = *word;
        s.id = SentenceId(tpl.id, g.group, term.text, emotion ? *emotion : "",
                          word ? *word : "");
        out.push_back(std::move(s));
      };
      if (!sentiment) {
        emit(nullptr, nullptr);
        continue;
      }
      for (const auto &e : sorted_emotions) {
        for (const auto &w : e.WordsFor(tpl.slot)) emit(&e.emotion, &w);
      }
    }
  }
  return out;
}

std::vector<ProbeSentence> GenerateCorpus(const std::vector<Template> &templates,
                                          const std::vector<GroupLexicon> &groups,
                                          const std::vector<EmotionLexicon> &emotions,
                                          const CorpusConfig &config) {
  std::set<std::string> template_ids;
  for (const auto &t : templates) {
    if (!template_ids.insert(t.id).second) {
      throw Error(ErrorCode::kDuplicateTemplateId, "template id " + t.id);
    }
  }
  std::vector<ProbeSentence> corpus;
  std::set<std::string> ids;
  for (const auto &t : templates) {
    for (auto &s : ExpandTemplate(t, groups, emotions, config)) {
      if (!ids.insert(s.id).second) {
        throw Error(ErrorCode::kIdCollision, "sentence id " + s.id + " repeats");
      }
      corpus.push_back(std::move(s));
    }
  }
  return corpus;
}

namespace {

ordered_json OptionalField(const std::optional<std::string> &v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<std::string> ReadOptional(const ordered_json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::string SerializeCorpus(const std::vector<ProbeSentence> &corpus) {
  std::string out;
  for (const auto &s : corpus) {
    ordered_json j;
    j["id"] = s.id;
    j["template_id"] = s.template_id;
    j["group"] = s.group;
    j["group_term"] = s.group_term;
    j["emotion"] = OptionalField(s.emotion);
    j["slot_kind"] = SlotKindName(s.slot_kind);
    j["slot_word"] = OptionalField(s.slot_word);
    j["text"] = s.text;
    out += j.dump();
    out += '\n';
  }
  return out;
}

ProbeFile ParseProbeRecords(std::string_view content, std::string_view origin) {
  ProbeFile file;
  std::set<std::string> ids;
  std::istringstream in{std::string(content)};
  std::string line;
  int lineno = 0;
  bool saw_probe = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    ProbeSentence s;
    try {
      auto j = ordered_json::parse(line);
      s.id = j.at("id").get<std::string>();
      if (j.contains("source_id")) {
        s.template_id = j.at("source_id").get<std::string>();
        file.comparative = true;
      } else {
        s.template_id = j.at("template_id").get<std::string>();
        saw_probe = true;
      }
      s.group = j.at("group").get<std::string>();
      s.group_term = j.at("group_term").get<std::string>();
      s.emotion = ReadOptional(j, "emotion");
      s.slot_word = ReadOptional(j, "slot_word");
      s.slot_kind = ParseSlotKind(j.value("slot_kind", std::string("none")));
      s.text = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    if (!ids.insert(s.id).second) {
      throw Error(ErrorCode::kIdCollision, where + ": duplicate id " + s.id);
    }
    file.records.push_back(std::move(s));
  }
  if (saw_probe && file.comparative) {
    throw Error(ErrorCode::kParse,
                std::string(origin) + ": mixes probe and comparative records");
  }
  return file;
}

ProbeFile ReadProbeFile(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingStageOutput, path.string() + " does not exist");
  }
  return ParseProbeRecords(ReadFile(path), path.string());
}

}  // namespace bits
