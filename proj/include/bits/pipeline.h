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

#ifndef BITS_PIPELINE_H_
#define BITS_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bits/bias.h"
#include "bits/scoring.h"

namespace bits {

struct RunConfig {
  std::filesystem::path templates;
  std::filesystem::path groups;
  std::filesystem::path emotions;
  std::filesystem::path articles;  // optional
  std::filesystem::path sources;   // optional; enables perturbation
  std::vector<std::string> targets;  // perturbation targets; empty = defaults
  std::vector<RegisteredScorer> scorers;
  FactorPreset preset = FactorPreset::kGroupTemplateEmotion;
  double alpha = kDefaultAlpha;
  std::filesystem::path out = "out";
  bool deterministic = false;
};

// Reads the JSON run configuration. Relative paths resolve against the
// configuration file's directory. "scorers" is either an inline array
// or the path of a registry file. Throws kConfig.
RunConfig LoadRunConfig(const std::filesystem::path &path);

struct StageOptions {
  std::optional<std::filesystem::path> input;  // probe or comparative file
  std::optional<std::string> scorer;           // restrict to one scorer
};

enum class Stage { kGenerate, kPerturb, kScore, kAnalyze, kReport, kRun };

// Stage file names inside the output directory.
inline constexpr const char *kCorpusFile = "corpus.jsonl";
inline constexpr const char *kComparativeFile = "comparative.jsonl";
inline constexpr const char *kScoresFile = "scores.jsonl";
inline constexpr const char *kBiasReportFile = "bias_report.json";
inline constexpr const char *kReportDir = "report";
inline constexpr const char *kSocialDir = "social";

// Runs one stage (or the whole chain for kRun), reading and writing only
// stage files under config.out. Throws Error; see ErrorClass for the
// mapping onto exit statuses.
void RunStage(const RunConfig &config, Stage stage, const StageOptions &options,
              std::ostream &log);

}  // namespace bits

#endif  // BITS_PIPELINE_H_
