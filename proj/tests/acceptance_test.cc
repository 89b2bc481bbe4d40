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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bits/bias.h"
#include "bits/corpus.h"
#include "bits/lexicon.h"
#include "bits/ols.h"
#include "bits/perturbation.h"
#include "bits/report.h"
#include "bits/scoring.h"
#include "bits/tdist.h"
#include "bits/text_util.h"
#include "json.hpp"
#include "oracles.h"
#include "test_data.h"

namespace bits {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kCorpusSeconds = 1.0;
constexpr double kOlsTolerance = 1e-9;
constexpr int kOlsDatasets = 100;
constexpr double kCauchyTolerance = 1e-10;
constexpr double kNormalLimitTolerance = 1e-3;
constexpr double kPowerDelta = 0.1;
constexpr double kPowerSigma = 0.2;
constexpr int kPowerRuns = 100;
constexpr int kPowerRequired = 99;
constexpr double kPowerFlagAlpha = 0.001;
constexpr double kPowerNullAlpha = 0.05;
constexpr double kPowerSeconds = 10.0;
constexpr double kRunSeconds = 5.0;
constexpr double kMeanTolerance = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Shipped {
  std::vector<Template> templates = LoadTemplates(testing::DataPath("templates.tsv"));
  std::vector<GroupLexicon> groups = LoadGroupLexicons(testing::DataPath("groups.tsv"));
  std::vector<EmotionLexicon> emotions =
      LoadEmotionLexicons(testing::DataPath("emotions.tsv"));
  CorpusConfig config{ArticleRules::Load(testing::DataPath("articles.tsv"))};
};

Outcome CorpusGeneration() {
  Shipped d;
  const auto start = Clock::now();
  auto corpus = GenerateCorpus(d.templates, d.groups, d.emotions, d.config);
  const std::string first = SerializeCorpus(corpus);
  const double elapsed = Seconds(start);
  const std::string second =
      SerializeCorpus(GenerateCorpus(d.templates, d.groups, d.emotions, d.config));
  size_t neutral = 0, sentiment = 0;
  for (const auto &s : corpus) {
    const bool is_neutral = s.template_id == "T1" || s.template_id == "T2" ||
                            s.template_id == "T3" || s.template_id == "T4" ||
                            s.template_id == "T5";
    (is_neutral ? neutral : sentiment) += 1;
  }
  std::ostringstream msg;
  msg << corpus.size() << " sentences (" << neutral << " neutral, " << sentiment
      << " sentiment), identical=" << (first == second) << ", " << elapsed << " s";
  return {corpus.size() == 2200 && neutral == 100 && sentiment == 2100 && first == second &&
              elapsed < kCorpusSeconds,
          msg.str()};
}

Outcome PerturbationCountLaw() {
  Shipped d;
  PerturbationRule rule;
  std::mt19937_64 rng(2024);
  const char *hits[] = {"My disability is part of me", "Disabled and proud",
                        "Access matters #disability", "disability, disability, DISABILITY"};
  const char *misses[] = {"dinner recipes", "an abled body", "disabilities everywhere"};
  bool ok = true;
  std::ostringstream msg;
  for (size_t n : {size_t{1}, size_t{7}, size_t{70}, size_t{141}, size_t{500}}) {
    std::vector<SourceDocument> docs;
    for (size_t i = 0; i < n; ++i) {
      docs.push_back({"h" + std::to_string(i), "p", hits[rng() % 4]});
      if (rng() % 2) docs.push_back({"m" + std::to_string(i), "p", misses[rng() % 3]});
    }
    auto corpus = BuildComparativeCorpus(docs, rule, d.groups);
    if (corpus.records.size() != n * 20) ok = false;
    msg << n << "->" << corpus.records.size() << " ";
  }
  // Identity: each span replaced by its own surface form.
  size_t identity_checks = 0;
  auto sources = ReadSourceDocuments(testing::DataPath("sample_sources.jsonl"));
  for (const char *h : hits) sources.push_back({"x", "p", h});
  for (const auto &doc : sources) {
    auto spans = FindTargets(doc.text, rule);
    for (const auto &s : spans) {
      const std::string surface = doc.text.substr(s.begin, s.end - s.begin);
      if (PerturbDocument(doc, {s}, surface) != doc.text) ok = false;
      ++identity_checks;
    }
  }
  msg << "identity checks=" << identity_checks;
  return {ok && identity_checks > 0, msg.str()};
}

Outcome OlsOracle() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(3, 60);
  std::uniform_real_distribution<double> loc(-1.0, 1.0), scale(0.05, 2.0);
  double worst = 0.0;
  for (int rep = 0; rep < kOlsDatasets; ++rep) {
    const int na = size(rng), nb = size(rng);
    const double ma = loc(rng), mb = loc(rng), sa = scale(rng);
    std::normal_distribution<double> ga(ma, sa), gb(mb, sa);
    FactorFrame frame;
    Factor g{"group", {}, "A", {}};
    std::vector<double> a, b;
    for (int i = 0; i < na + nb; ++i) {
      const bool in_a = (rng() % 2 == 0 && static_cast<int>(a.size()) < na) ||
                        static_cast<int>(b.size()) >= nb;
      const double y = in_a ? ga(rng) : gb(rng);
      (in_a ? a : b).push_back(y);
      frame.y.push_back(y);
      g.values.push_back(in_a ? "A" : "B");
    }
    frame.factors.push_back(g);
    auto dm = BuildDesignMatrix(frame);
    Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(frame.y.data(),
                                                    static_cast<Eigen::Index>(frame.n()));
    auto fit = FitOls(dm.x, y, dm.labels);
    auto oracle = testing::PooledTTest(a, b);
    worst = std::max(worst, std::fabs(fit.p_values(1) - oracle.p));
  }
  std::ostringstream msg;
  msg << kOlsDatasets << " datasets, max |p - p_oracle| = " << worst;
  return {worst <= kOlsTolerance, msg.str()};
}

Outcome TDistribution() {
  bool zero_ok = true;
  for (double df : {1.0, 2.0, 7.5, 30.0, 1e6}) zero_ok = zero_ok && TwoSidedP(0.0, df) == 1.0;
  const double cauchy = TwoSidedP(1.0, 1.0);
  const double normal = TwoSidedP(1.96, 1e6);
  std::ostringstream msg;
  msg.precision(17);
  msg << "p(0)=1 exact: " << zero_ok << ", p(1;1)=" << cauchy << " (oracle "
      << testing::CauchyTwoSidedP(1.0) << "), p(1.96;1e6)=" << normal;
  return {zero_ok && std::fabs(cauchy - 0.5) <= kCauchyTolerance &&
              std::fabs(cauchy - testing::CauchyTwoSidedP(1.0)) <= kCauchyTolerance &&
              std::fabs(normal - 0.05) <= kNormalLimitTolerance,
          msg.str()};
}

// Builtin valence scores of the shipped corpus.
struct ScoredCorpus {
  std::vector<ProbeSentence> corpus;
  std::vector<double> base;
};

ScoredCorpus ScoreShipped() {
  Shipped d;
  ScoredCorpus s;
  s.corpus = GenerateCorpus(d.templates, d.groups, d.emotions, d.config);
  auto lexicon = ValenceLexicon::Load(testing::DataPath("valence_lexicon.json"));
  for (const auto &p : s.corpus) s.base.push_back(ScoreBuiltin(p.text, lexicon));
  return s;
}

std::vector<Observation> Observe(const ScoredCorpus &s, const std::vector<double> &y) {
  std::vector<Observation> obs;
  for (size_t i = 0; i < s.corpus.size(); ++i) {
    const auto &p = s.corpus[i];
    obs.push_back({p.group, p.template_id, p.emotion.value_or(""), y[i]});
  }
  return obs;
}

Outcome InferenceInvariance(const ScoredCorpus &s) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<double> y;
  for (size_t i = 0; i < s.base.size(); ++i) {
    y.push_back(s.base[i] + noise(rng) - (s.corpus[i].group == "DSBL" ? 0.05 : 0.0));
  }
  auto inference = [&](const std::vector<double> &values) {
    json j = BiasReportToJson(
        BiasTest(MakeFrame(Observe(s, values), FactorPreset::kGroupTemplateEmotion)));
    json out = json::array();
    for (const auto &c : j["coefficients"]) {
      if (c["term"].get<std::string>().rfind("group:", 0) == 0) {
        out.push_back({c["term"], c["t_stat"], c["p_value"]});
      }
    }
    for (const auto &g : j["groups"]) out.push_back({g["group"], g["star"]});
    return out.dump();
  };
  const std::string base = inference(y);
  const std::pair<double, double> transforms[] = {
      {2.0, 0.0}, {0.5, 0.0}, {1.0, 0.3}, {1.0, -0.75}, {3.7, -1.2}, {0.01, 0.4}, {17.0, 5.0}};
  int identical = 0;
  for (const auto &[a, b] : transforms) {
    std::vector<double> t;
    for (double v : y) t.push_back(a * v + b);
    identical += inference(t) == base;
  }
  std::ostringstream msg;
  msg << identical << "/" << std::size(transforms) << " affine transforms bit-identical";
  return {identical == static_cast<int>(std::size(transforms)), msg.str()};
}

// The synthetic scorer is group-blind apart from the DSBL shift; the
// builtin lexicon is not, so its scores are not used as a baseline here.
Outcome InjectedBiasPower(const ScoredCorpus &s) {
  const auto start = Clock::now();
  int good = 0, dsbl_missed = 0, ndsbl_flagged = 0;
  for (int seed = 1; seed <= kPowerRuns; ++seed) {
    std::mt19937_64 rng(static_cast<uint64_t>(seed));
    std::normal_distribution<double> noise(0.0, kPowerSigma);
    std::vector<double> y;
    for (size_t i = 0; i < s.base.size(); ++i) {
      y.push_back(-(s.corpus[i].group == "DSBL" ? kPowerDelta : 0.0) + noise(rng));
    }
    auto report = BiasTest(MakeFrame(Observe(s, y), FactorPreset::kGroupTemplateEmotion),
                           kPowerFlagAlpha);
    bool dsbl = false, ndsbl = false;
    for (const auto &g : report.groups) {
      if (g.group == "DSBL") dsbl = g.biased_negative;
      if (g.group == "NDSBL") ndsbl = g.coefficient < 0.0 && g.p_value < kPowerNullAlpha;
    }
    dsbl_missed += !dsbl;
    ndsbl_flagged += ndsbl;
    good += dsbl && !ndsbl;
  }
  const double elapsed = Seconds(start);
  std::ostringstream msg;
  msg << good << "/" << kPowerRuns << " runs correct (DSBL missed " << dsbl_missed
      << ", NDSBL flagged " << ndsbl_flagged << "), " << elapsed << " s";
  return {good >= kPowerRequired && elapsed < kPowerSeconds, msg.str()};
}

int RunCli(const std::string &args) {
  const std::string cmd = std::string(BITS_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> Bundle(const fs::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = ReadFile(e.path());
  }
  return files;
}

std::string ExpectedStars(double p) {
  return p < 0.001 ? "***" : p < 0.01 ? "**" : p < 0.05 ? "*" : "";
}

std::string ExpectedDisplay(double p) {
  if (p < 2e-16) return "2e-16" + ExpectedStars(p);
  char buf[32];
  std::snprintf(buf, sizeof(buf), p >= 0.001 ? "%.3f" : "%.3g", p);
  return buf + ExpectedStars(p);
}

Outcome EndToEnd(const fs::path &first) {
  const fs::path second = testing::TempDir("accept_e2e_b");
  const std::string config = testing::DataPath("config.json").string();
  const auto start = Clock::now();
  const int rc = RunCli("run --config " + config + " --out " + first.string() + " --deterministic");
  const double elapsed = Seconds(start);
  const int rc2 =
      RunCli("run --config " + config + " --out " + second.string() + " --deterministic");
  const auto a = Bundle(first), b = Bundle(second);
  fs::remove_all(second);

  // Every displayed significance entry against an independent rendering.
  size_t entries = 0, wrong = 0;
  bool floor_seen = false;
  for (const char *dir : {"report/report.json", "social/report/report.json"}) {
    auto it = a.find(dir);
    if (it == a.end()) {
      ++wrong;
      continue;
    }
    const json j = json::parse(it->second);
    for (const auto &r : j["bias_reports"]) {
      for (size_t k = 0; k < r["groups"].size(); ++k) {
        const double p = r["groups"][k]["p_value"].get<double>();
        const std::string shown = r["display"][k]["display"].get<std::string>();
        ++entries;
        wrong += shown != ExpectedDisplay(p);
        wrong += r["groups"][k]["star"].get<std::string>() != ExpectedStars(p);
        floor_seen = floor_seen || p < 2e-16;
      }
    }
  }
  // The floor itself, for a p-value far below it.
  const bool floor_ok = RenderSignificance(1e-300) == "2e-16***" &&
                        RenderSignificance(0.0) == "2e-16***";
  std::ostringstream msg;
  msg << "exit " << rc << "/" << rc2 << ", " << elapsed << " s, " << a.size()
      << " files, identical=" << (a == b) << ", " << entries << " significance entries, "
      << wrong << " wrong, floor hit in run=" << floor_seen;
  return {rc == 0 && rc2 == 0 && elapsed < kRunSeconds && a == b && !a.empty() &&
              entries > 0 && wrong == 0 && floor_ok,
          msg.str()};
}

Outcome TableRendering(const fs::path &out) {
  size_t cells = 0, bad_cells = 0, rows = 0, bad_min = 0;
  for (const char *sub : {"", "social"}) {
    const fs::path dir = out / sub;
    const bool social = std::string(sub) == "social";
    auto probes = ReadProbeFile(dir / (social ? "comparative.jsonl" : "corpus.jsonl"));
    auto scores = ReadScores(dir / "scores.jsonl");
    std::map<std::string, const ProbeSentence *> index;
    for (const auto &p : probes.records) index[p.id] = &p;
    // Brute-force sums keyed by (table, row, group).
    std::map<std::tuple<std::string, std::string, std::string>, std::pair<double, size_t>> acc;
    for (const auto &s : scores) {
      const auto *p = index.at(s.sentence_id);
      auto &m = acc[{"models", s.scorer_name, p->group}];
      m.first += s.standardized;
      ++m.second;
      if (!social) {
        auto &t = acc[{s.scorer_name, p->template_id, p->group}];
        t.first += s.standardized;
        ++t.second;
      }
    }
    const json report = json::parse(ReadFile(dir / "report" / "report.json"));
    for (const auto &table : report["mean_tables"]) {
      const std::string title = table["title"];
      const auto &columns = table["columns"];
      for (size_t r = 0; r < table["rows"].size(); ++r) {
        const std::string row = table["rows"][r];
        size_t argmin = 0;
        double best = INFINITY;
        for (size_t c = 0; c < columns.size(); ++c) {
          const auto &[sum, n] = acc.at({title, row, columns[c].get<std::string>()});
          const double mean = sum / static_cast<double>(n);
          ++cells;
          bad_cells += std::fabs(table["cells"][r][c].get<double>() - mean) > kMeanTolerance;
          if (mean < best) {
            best = mean;
            argmin = c;
          }
        }
        ++rows;
        bad_min += table["min_column"][r].get<size_t>() != argmin;
      }
    }
  }
  std::ostringstream msg;
  msg << cells << " cells (" << bad_cells << " off by > " << kMeanTolerance << "), " << rows
      << " rows (" << bad_min << " wrong minimum)";
  return {cells > 0 && bad_cells == 0 && bad_min == 0, msg.str()};
}

}  // namespace
}  // namespace bits

int main() {
  using bits::Outcome;
  int failures = 0;
  auto report = [&](const char *name, const std::function<Outcome()> &check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failures += !o.pass;
  };
  report("corpus_generation", bits::CorpusGeneration);
  report("perturbation_count_law", bits::PerturbationCountLaw);
  report("ols_oracle_equivalence", bits::OlsOracle);
  report("t_distribution_accuracy", bits::TDistribution);
  const auto scored = bits::ScoreShipped();
  report("inference_invariance", [&] { return bits::InferenceInvariance(scored); });
  report("injected_bias_power", [&] { return bits::InjectedBiasPower(scored); });
  const auto e2e = bits::testing::TempDir("accept_e2e_a");
  report("end_to_end_determinism", [&] { return bits::EndToEnd(e2e); });
  report("table_rendering", [&] { return bits::TableRendering(e2e); });
  std::filesystem::remove_all(e2e);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
