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

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "bits/error.h"
#include "bits/lexicon.h"
#include "bits/text_util.h"
#include "doctest.h"
#include "test_data.h"

namespace bits {
namespace {

using testing::DataPath;

struct Shipped {
  std::vector<Template> templates = LoadTemplates(DataPath("templates.tsv"));
  std::vector<GroupLexicon> groups = LoadGroupLexicons(DataPath("groups.tsv"));
  std::vector<EmotionLexicon> emotions = LoadEmotionLexicons(DataPath("emotions.tsv"));
  CorpusConfig config{ArticleRules::Load(DataPath("articles.tsv"))};

  const Template &Get(const std::string &id) const {
    return *std::find_if(templates.begin(), templates.end(),
                         [&](const Template &t) { return t.id == id; });
  }
};

std::string ReplaceAll(std::string s, const std::string &from, const std::string &to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

// Folds "an" into "a" so texts compare modulo article correction.
std::string FoldArticles(std::string s) {
  s = ReplaceAll(s, " an ", " a ");
  if (s.rfind("An ", 0) == 0) s.replace(0, 3, "A ");
  return s;
}

TEST_CASE("shipped lexicons match the published tables") {
  Shipped d;
  REQUIRE(d.templates.size() == 10);
  REQUIRE(d.groups.size() == 4);
  std::vector<std::string> labels;
  for (const auto &g : d.groups) {
    labels.push_back(g.group);
    CHECK(g.terms.size() == 5);
  }
  CHECK(labels == std::vector<std::string>{"DSBL", "DSBL_S", "NDSBL", "NRMA"});
  CHECK(d.groups[0].terms[0].text == "Autism Spectrum Disorder");
  CHECK(d.groups[3].terms[4].text == "Muscular");
  REQUIRE(d.emotions.size() == 7);
  CHECK(d.emotions[0].emotion == "Anger");
  CHECK(d.emotions[6].emotion == "SurpriseNeg");
  for (const auto &e : d.emotions) {
    CHECK(e.emotional_words.size() == 3);
    CHECK(e.event_words.size() == 3);
  }
  for (int i = 0; i < 5; ++i) CHECK(d.templates[i].kind == TemplateKind::kNeutral);
  for (int i = 5; i < 10; ++i) CHECK(d.templates[i].kind == TemplateKind::kSentiment);
}

TEST_CASE("expand_template counts and canonical order") {
  Shipped d;
  auto t1 = ExpandTemplate(d.Get("T1"), d.groups, d.emotions, d.config);
  CHECK(t1.size() == 20);
  CHECK(t1.front().group == "DSBL");
  CHECK(t1.back().group_term == "Muscular");

  auto t6 = ExpandTemplate(d.Get("T6"), d.groups, d.emotions, d.config);
  CHECK(t6.size() == 420);
  auto deaf_alarmed = std::find_if(t6.begin(), t6.end(), [](const ProbeSentence &s) {
    return s.group_term == "Deaf" && s.slot_word == "alarmed";
  });
  REQUIRE(deaf_alarmed != t6.end());
  CHECK(deaf_alarmed->text == "They were alarmed because of the Deaf neighbour.");
  CHECK(deaf_alarmed->emotion == "Fear");
  // group, term, emotion, word
  CHECK(t6[0].emotion == "Anger");
  CHECK(t6[0].slot_word == "aggravated");
  CHECK(t6[1].slot_word == "enraged");
  CHECK(t6[3].emotion == "Disgust");
  CHECK(t6[21].group_term == "Attention Deficit Disorder");
}

TEST_CASE("generate_corpus full cross product") {
  Shipped d;
  auto corpus = GenerateCorpus(d.templates, d.groups, d.emotions, d.config);
  CHECK(corpus.size() == 2200);
  size_t neutral = 0;
  for (const auto &s : corpus) neutral += s.slot_kind == SlotKind::kNone;
  CHECK(neutral == 100);

  // Partition law.
  size_t expected = 0;
  for (const auto &t : d.templates) {
    size_t words = 0;
    if (t.kind == TemplateKind::kSentiment) {
      for (const auto &e : d.emotions) words += e.WordsFor(t.slot).size();
    }
    expected += TotalTerms(d.groups) * (t.kind == TemplateKind::kNeutral ? 1 : words);
  }
  CHECK(corpus.size() == expected);

  std::set<std::string> ids;
  for (const auto &s : corpus) ids.insert(s.id);
  CHECK(ids.size() == corpus.size());

  CHECK(GenerateCorpus({}, d.groups, d.emotions, d.config).empty());
}

TEST_CASE("every probe satisfies its invariants and round-trips to its template") {
  Shipped d;
  auto corpus = GenerateCorpus(d.templates, d.groups, d.emotions, d.config);
  std::map<std::string, TermForm> forms;
  for (const auto &g : d.groups) {
    for (const auto &t : g.terms) forms[t.text] = t;
  }
  for (const auto &s : corpus) {
    INFO(s.text);
    CHECK(s.text.find_first_of("<>") == std::string::npos);
    const Template &tpl = d.Get(s.template_id);
    CHECK(s.emotion.has_value() == (tpl.kind == TemplateKind::kSentiment));
    CHECK(s.slot_word.has_value() == (tpl.kind == TemplateKind::kSentiment));

    const TermForm &form = forms.at(s.group_term);
    std::string inserted =
        form.casing == TermCasing::kLower ? AsciiLower(form.text) : form.text;
    size_t first = s.text.find(inserted);
    REQUIRE(first != std::string::npos);
    CHECK(s.text.find(inserted, first + 1) == std::string::npos);

    std::string back = s.text;
    if (form.mode == RealizationMode::kPeopleFirst) {
      size_t with = back.find(" with " + inserted);
      REQUIRE(with != std::string::npos);
      size_t head = back.rfind(' ', with - 1) + 1;
      std::string noun = back.substr(head, with - head);
      back.replace(head, with + 6 + inserted.size() - head, "<group> " + noun);
    } else {
      back.replace(first, inserted.size(), "<group>");
    }
    if (s.slot_word) {
      std::string tag(tpl.slot == SlotKind::kEvent ? kEventTag : kEmotionalTag);
      back = ReplaceAll(back, " " + *s.slot_word + " ", " " + tag + " ");
      back = ReplaceAll(back, " " + *s.slot_word + ".", " " + tag + ".");
    }
    CHECK(FoldArticles(back) == FoldArticles(tpl.body));
  }
}

TEST_CASE("generation is deterministic and independent of lexicon row order") {
  Shipped d;
  const std::string a = SerializeCorpus(GenerateCorpus(d.templates, d.groups, d.emotions, d.config));
  const std::string b = SerializeCorpus(GenerateCorpus(d.templates, d.groups, d.emotions, d.config));
  CHECK(a == b);

  auto dir = testing::TempDir("perm");
  std::mt19937 rng(7);
  for (const char *name : {"groups.tsv", "emotions.tsv"}) {
    auto rows = Split(ReadFile(DataPath(name)), '\n');
    std::shuffle(rows.begin(), rows.end(), rng);
    std::string shuffled;
    for (const auto &r : rows) shuffled += r + "\n";
    WriteFile(dir / name, shuffled);
  }
  auto groups = LoadGroupLexicons(dir / "groups.tsv");
  auto emotions = LoadEmotionLexicons(dir / "emotions.tsv");
  std::reverse(groups.begin(), groups.end());
  std::reverse(emotions.begin(), emotions.end());
  CHECK(SerializeCorpus(GenerateCorpus(d.templates, groups, emotions, d.config)) == a);
  std::filesystem::remove_all(dir);
}

TEST_CASE("corpus serialization round-trips") {
  Shipped d;
  auto corpus = GenerateCorpus(d.templates, d.groups, d.emotions, d.config);
  auto parsed = ParseProbeRecords(SerializeCorpus(corpus), "mem");
  CHECK_FALSE(parsed.comparative);
  CHECK(parsed.records == corpus);
}

TEST_CASE("corpus errors") {
  Shipped d;
  std::vector<Template> dup = {d.templates[0], d.templates[0]};
  try {
    GenerateCorpus(dup, d.groups, d.emotions);
    FAIL("expected DuplicateTemplateId");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kDuplicateTemplateId);
  }

  Template no_head = ParseTemplate("I am <group>.", "TX");
  try {
    ExpandTemplate(no_head, d.groups, d.emotions);
    FAIL("expected RealizationFailure");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kRealizationFailure);
    CHECK(std::string(e.what()).find("Autism Spectrum Disorder") != std::string::npos);
  }

  auto dup_term = d.groups;
  dup_term[1].terms.push_back({"tall"});
  CHECK_THROWS_AS(ValidateGroups(dup_term), Error);

  CHECK_THROWS_AS(ParseProbeRecords("{\"id\": 3}\n", "mem"), Error);
}

}  // namespace
}  // namespace bits
