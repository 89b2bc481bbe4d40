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

#include "bits/pipeline.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iterator>
#include <unordered_map>

#include "bits/corpus.h"
#include "bits/error.h"
#include "bits/external_scorer.h"
#include "bits/lexicon.h"
#include "bits/perturbation.h"
#include "bits/report.h"
#include "bits/template.h"
#include "bits/text_util.h"
#include "json.hpp"

namespace bits {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

fs::path Resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void RequireFile(const fs::path &path, const char *what) {
  if (path.empty()) throw Error(ErrorCode::kConfig, std::string(what) + " not configured");
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kConfig, std::string(what) + " " + path.string() + " not found");
  }
}

}  // namespace

RunConfig LoadRunConfig(const fs::path &path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kConfig, "config " + path.string() + " not found");
  }
  const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  RunConfig c;
  try {
    json j = json::parse(ReadFile(path));
    auto opt_path = [&](const char *key) {
      return j.contains(key) ? Resolve(base, j[key].get<std::string>()) : fs::path();
    };
    c.templates = opt_path("templates");
    c.groups = opt_path("groups");
    c.emotions = opt_path("emotions");
    c.articles = opt_path("articles");
    c.sources = opt_path("sources");
    c.targets = j.value("targets", std::vector<std::string>{});
    if (j.contains("scorers")) {
      const auto &s = j["scorers"];
      if (s.is_string()) {
        fs::path registry = Resolve(base, s.get<std::string>());
        RequireFile(registry, "scorer registry");
        c.scorers = ParseRegistry(ReadFile(registry), registry.parent_path());
      } else {
        c.scorers = ParseRegistry(s.dump(), base);
      }
    }
    if (j.contains("factors")) c.preset = ParsePreset(j["factors"].get<std::string>());
    c.alpha = j.value("alpha", kDefaultAlpha);
    if (j.contains("out")) c.out = Resolve(base, j["out"].get<std::string>());
    c.deterministic = j.value("deterministic", false);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
    throw Error(ErrorCode::kConfig, "alpha must lie in (0, 1)");
  }
  return c;
}

namespace {

void Log(std::ostream &log, const std::string &stage, const std::string &msg) {
  log << "[bits] " << stage << ": " << msg << "\n";
}

std::vector<const RegisteredScorer *> SelectedScorers(const RunConfig &config,
                                                      const StageOptions &options) {
  std::vector<const RegisteredScorer *> out;
  for (const auto &s : config.scorers) {
    if (!options.scorer || *options.scorer == s.descriptor.name) out.push_back(&s);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kConfig,
                options.scorer ? "scorer " + *options.scorer + " is not registered"
                               : std::string("no scorers registered"));
  }
  return out;
}

fs::path InputPath(const RunConfig &config, const StageOptions &options) {
  return options.input ? *options.input : config.out / kCorpusFile;
}

void Generate(const RunConfig &config, std::ostream &log) {
  RequireFile(config.templates, "template file");
  RequireFile(config.groups, "group lexicon");
  RequireFile(config.emotions, "emotion lexicon");
  CorpusConfig cc;
  if (!config.articles.empty()) {
    RequireFile(config.articles, "article exceptions");
    cc.articles = ArticleRules::Load(config.articles);
  }
  auto corpus = GenerateCorpus(LoadTemplates(config.templates),
                               LoadGroupLexicons(config.groups),
                               LoadEmotionLexicons(config.emotions), cc);
  size_t neutral = std::count_if(corpus.begin(), corpus.end(), [](const auto &s) {
    return s.slot_kind == SlotKind::kNone;
  });
  const fs::path out = config.out / kCorpusFile;
  WriteFile(out, SerializeCorpus(corpus));
  Log(log, "generate", std::to_string(corpus.size()) + " sentences (" +
                           std::to_string(neutral) + " neutral, " +
                           std::to_string(corpus.size() - neutral) + " sentiment) -> " +
                           out.string());
}

void Perturb(const RunConfig &config, const fs::path &out_dir, std::ostream &log) {
  RequireFile(config.sources, "source documents");
  RequireFile(config.groups, "group lexicon");
  PerturbationRule rule = config.targets.empty() ? PerturbationRule()
                                                 : PerturbationRule(config.targets);
  auto corpus = BuildComparativeCorpus(ReadSourceDocuments(config.sources), rule,
                                       LoadGroupLexicons(config.groups));
  const fs::path out = out_dir / kComparativeFile;
  WriteFile(out, SerializeComparative(corpus.records));
  Log(log, "perturb", std::to_string(corpus.records.size()) + " records from " +
                          std::to_string(corpus.matched_documents) + " documents (" +
                          std::to_string(corpus.skipped_documents) +
                          " skipped without a target) -> " + out.string());
}

void Score(const RunConfig &config, const fs::path &input, const fs::path &out_dir,
           const StageOptions &options, std::ostream &log) {
  const auto probes = ReadProbeFile(input);
  if (probes.records.empty()) {
    throw Error(ErrorCode::kEmptyCollection, input.string() + " has no records");
  }
  std::vector<ScoreRequest> requests;
  for (const auto &p : probes.records) requests.push_back({p.id, p.text});
  std::vector<ScoreRecord> all;
  for (const auto *s : SelectedScorers(config, options)) {
    size_t clamped = 0;
    auto records = ScoreWithExternal(requests, s->descriptor, s->endpoint, &clamped);
    if (clamped > 0) {
      Log(log, "score", "warning: " + std::to_string(clamped) + " raw scores from " +
                            s->descriptor.name + " clamped into the native range");
    }
    Log(log, "score", s->descriptor.name + ": " + std::to_string(records.size()) +
                          " records");
    all.insert(all.end(), records.begin(), records.end());
  }
  const fs::path out = out_dir / kScoresFile;
  WriteFile(out, SerializeScores(all));
  Log(log, "score", "-> " + out.string());
}

// Probe records joined with scores of one scorer.
std::vector<Observation> Observations(const ProbeFile &probes,
                                      const std::vector<ScoreRecord> &scores,
                                      const std::string &scorer) {
  std::unordered_map<std::string, const ProbeSentence *> index;
  for (const auto &p : probes.records) index.emplace(p.id, &p);
  std::vector<Observation> obs;
  for (const auto &s : scores) {
    if (s.scorer_name != scorer) continue;
    auto it = index.find(s.sentence_id);
    if (it == index.end()) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "score for unknown sentence " + s.sentence_id);
    }
    const auto &p = *it->second;
    obs.push_back({p.group, p.template_id, p.emotion.value_or(""), s.standardized});
  }
  return obs;
}

std::vector<std::string> ScorersInScores(const RunConfig &config,
                                         const StageOptions &options,
                                         const std::vector<ScoreRecord> &scores) {
  std::vector<std::string> names;
  for (const auto *s : SelectedScorers(config, options)) {
    const auto &name = s->descriptor.name;
    bool present = std::any_of(scores.begin(), scores.end(),
                               [&](const ScoreRecord &r) { return r.scorer_name == name; });
    if (present) names.push_back(name);
  }
  if (names.empty()) {
    throw Error(ErrorCode::kMissingStageOutput, "score file has no records for the selected scorers");
  }
  return names;
}

void Analyze(const RunConfig &config, FactorPreset preset, const fs::path &input,
             const fs::path &out_dir, const StageOptions &options, std::ostream &log) {
  const auto probes = ReadProbeFile(input);
  const auto scores = ReadScores(out_dir / kScoresFile);
  ordered_json j;
  j["alpha"] = config.alpha;
  j["factors"] = PresetName(preset);
  j["input"] = input.filename().string();
  ordered_json reports = ordered_json::array();
  for (const auto &name : ScorersInScores(config, options, scores)) {
    auto frame = MakeFrame(Observations(probes, scores, name), preset);
    BiasReport report = BiasTest(frame, config.alpha, name);
    std::string flagged;
    for (const auto &g : report.groups) {
      if (g.biased_negative) flagged += (flagged.empty() ? "" : ", ") + g.group;
    }
    Log(log, "analyze", name + ": n=" + std::to_string(report.n) + ", biased-negative: " +
                            (flagged.empty() ? "none" : flagged));
    reports.push_back(BiasReportToJson(report));
  }
  j["reports"] = std::move(reports);
  const fs::path out = out_dir / kBiasReportFile;
  WriteFile(out, j.dump(2) + "\n");
  Log(log, "analyze", "-> " + out.string());
}

std::string Timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void Report(const RunConfig &config, const fs::path &input, const fs::path &out_dir,
            const StageOptions &options, std::ostream &log) {
  const auto probes = ReadProbeFile(input);
  const auto scores = ReadScores(out_dir / kScoresFile);
  const fs::path bias_path = out_dir / kBiasReportFile;
  if (!fs::exists(bias_path)) {
    throw Error(ErrorCode::kMissingStageOutput,
                bias_path.string() + " does not exist; run the analyze stage first");
  }
  const auto names = ScorersInScores(config, options, scores);
  std::vector<ScoreRecord> selected;
  for (const auto &s : scores) {
    if (std::find(names.begin(), names.end(), s.scorer_name) != names.end()) {
      selected.push_back(s);
    }
  }

  ReportInputs in;
  json bias;
  try {
    bias = json::parse(ReadFile(bias_path));
    for (const auto &r : bias.at("reports")) {
      BiasReport parsed = BiasReportFromJson(r);
      if (std::find(names.begin(), names.end(), parsed.scorer) != names.end()) {
        in.bias_reports.push_back(std::move(parsed));
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, bias_path.string() + ": " + e.what());
  }

  const auto items = JoinScores(probes.records, selected);
  in.model_means = BuildMeanTable(items, RowKey::kModel, "models");
  if (!probes.comparative) {
    for (const auto &name : names) {
      std::vector<ScoredItem> mine;
      std::copy_if(items.begin(), items.end(), std::back_inserter(mine),
                   [&](const ScoredItem &it) { return it.scorer == name; });
      in.template_means.push_back(BuildMeanTable(mine, RowKey::kTemplate, name));
    }
  }
  in.heatmap = BuildHeatmap(items);
  if (!config.deterministic) in.generated_at = Timestamp();

  const fs::path dir = out_dir / kReportDir;
  size_t n_files = 0;
  for (auto format : {ReportFormat::kDelimited, ReportFormat::kMarkdown,
                      ReportFormat::kStructured}) {
    for (const auto &[name, content] : RenderReport(in, format)) {
      WriteFile(dir / name, content);
      ++n_files;
    }
  }
  if (in.heatmap.empty()) Log(log, "report", "no DSBL/DSBL_S records; heatmap omitted");
  Log(log, "report", std::to_string(n_files) + " files -> " + dir.string());
}

}  // namespace

void RunStage(const RunConfig &config, Stage stage, const StageOptions &options,
              std::ostream &log) {
  const fs::path input = InputPath(config, options);
  switch (stage) {
    case Stage::kGenerate:
      Generate(config, log);
      return;
    case Stage::kPerturb:
      Perturb(config, config.out, log);
      return;
    case Stage::kScore:
      Score(config, input, config.out, options, log);
      return;
    case Stage::kAnalyze:
      Analyze(config, config.preset, input, config.out, options, log);
      return;
    case Stage::kReport:
      Report(config, input, config.out, options, log);
      return;
    case Stage::kRun: {
      Generate(config, log);
      const fs::path corpus = config.out / kCorpusFile;
      Score(config, corpus, config.out, options, log);
      Analyze(config, config.preset, corpus, config.out, options, log);
      Report(config, corpus, config.out, options, log);
      if (!config.sources.empty()) {
        // Real-world sentences carry no template structure.
        const fs::path social = config.out / kSocialDir;
        Perturb(config, social, log);
        const fs::path comparative = social / kComparativeFile;
        Score(config, comparative, social, options, log);
        Analyze(config, FactorPreset::kGroupOnly, comparative, social, options, log);
        Report(config, comparative, social, options, log);
      }
      return;
    }
  }
}

}  // namespace bits
