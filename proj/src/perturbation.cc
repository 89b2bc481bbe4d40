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

#include "bits/perturbation.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "bits/error.h"
#include "bits/text_util.h"
#include "json.hpp"

namespace bits {

using ordered_json = nlohmann::ordered_json;

PerturbationRule::PerturbationRule()
    : PerturbationRule({"disability", "disabled", "#disability"}) {}

PerturbationRule::PerturbationRule(std::vector<std::string> targets) {
  for (auto &t : targets) {
    std::string lower = AsciiLower(Trim(t));
    if (lower.empty() || lower == "#") {
      throw Error(ErrorCode::kConfig, "empty perturbation target");
    }
    targets_.push_back(std::move(lower));
  }
  if (targets_.empty()) throw Error(ErrorCode::kConfig, "no perturbation targets");
  std::sort(targets_.begin(), targets_.end());
  targets_.erase(std::unique(targets_.begin(), targets_.end()), targets_.end());
  std::stable_sort(targets_.begin(), targets_.end(),
                   [](const auto &a, const auto &b) { return a.size() > b.size(); });
}

std::vector<Span> FindTargets(std::string_view text, const PerturbationRule &rule) {
  std::vector<Span> spans;
  size_t i = 0;
  while (i < text.size()) {
    bool matched = false;
    if (i == 0 || !IsWordChar(text[i - 1])) {
      for (const auto &target : rule.targets()) {
        if (i + target.size() > text.size()) continue;
        if (!EqualsIgnoreCase(text.substr(i, target.size()), target)) continue;
        size_t end = i + target.size();
        if (end < text.size() && IsWordChar(text[end])) continue;
        spans.push_back({i, end});
        i = end;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return spans;
}

namespace {

std::string HashtagForm(std::string_view term) {
  std::string out;
  for (char c : term) {
    if (c != ' ' && c != '#') out += c;
  }
  return out;
}

}  // namespace

std::string PerturbDocument(const SourceDocument &doc, const std::vector<Span> &spans,
                            std::string_view replacement) {
  const std::string &text = doc.text;
  std::string out;
  size_t cursor = 0;
  for (const auto &span : spans) {
    if (span.begin < cursor || span.end <= span.begin || span.end > text.size()) {
      throw Error(ErrorCode::kOverlappingSpans,
                  "invalid span [" + std::to_string(span.begin) + "," +
                      std::to_string(span.end) + ") in document " + doc.id);
    }
    out.append(text, cursor, span.begin - cursor);
    if (text[span.begin] == '#') {
      out += '#';
      out += HashtagForm(replacement);
    } else if (span.begin > 0 && text[span.begin - 1] == '#') {
      out += HashtagForm(replacement);
    } else {
      out.append(replacement);
    }
    cursor = span.end;
  }
  out.append(text, cursor, std::string::npos);
  return out;
}

ComparativeCorpus BuildComparativeCorpus(const std::vector<SourceDocument> &docs,
                                         const PerturbationRule &rule,
                                         const std::vector<GroupLexicon> &groups) {
  const auto sorted_groups = SortedGroups(groups);
  ComparativeCorpus corpus;
  std::set<std::string> seen;
  for (const auto &doc : docs) {
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorCode::kIdCollision, "duplicate source document id " + doc.id);
    }
    auto spans = FindTargets(doc.text, rule);
    if (spans.empty()) {
      ++corpus.skipped_documents;
      continue;
    }
    ++corpus.matched_documents;
    for (const auto &g : sorted_groups) {
      for (const auto &term : g.terms) {
        ComparativeRecord r;
        r.source_id = doc.id;
        r.group = g.group;
        r.group_term = term.text;
        r.text = PerturbDocument(doc, spans, term.text);
        r.n_substitutions = spans.size();
        r.id = HexId('c', Fnv1a64(doc.id + '\x1f' + g.group + '\x1f' + term.text));
        corpus.records.push_back(std::move(r));
      }
    }
  }
  if (corpus.matched_documents == 0) {
    throw Error(ErrorCode::kEmptyCollection, "no source document contains a target term");
  }
  return corpus;
}

std::vector<SourceDocument> ParseSourceDocuments(std::string_view content,
                                                 std::string_view origin) {
  std::vector<SourceDocument> docs;
  std::istringstream in{std::string(content)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    SourceDocument d;
    try {
      auto j = ordered_json::parse(line);
      d.id = j.at("id").get<std::string>();
      d.platform = j.value("platform", std::string());
      d.text = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kParse,
                  std::string(origin) + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (d.id.empty() || d.text.empty()) {
      throw Error(ErrorCode::kParse, std::string(origin) + ":" +
                                         std::to_string(lineno) + ": empty id or text");
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<SourceDocument> ReadSourceDocuments(const std::filesystem::path &path) {
  return ParseSourceDocuments(ReadFile(path), path.string());
}

std::string SerializeComparative(const std::vector<ComparativeRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    ordered_json j;
    j["id"] = r.id;
    j["source_id"] = r.source_id;
    j["group"] = r.group;
    j["group_term"] = r.group_term;
    j["emotion"] = nullptr;
    j["slot_kind"] = "none";
    j["slot_word"] = nullptr;
    j["text"] = r.text;
    j["n_substitutions"] = r.n_substitutions;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace bits
