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

// Command-line front end: generate -> (perturb) -> score -> analyze -> report.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bits/error.h"
#include "bits/pipeline.h"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string scorer;
  std::string factors;
  std::string input;
  double alpha = 0.0;
  bool deterministic = false;
};

void AddCommonFlags(CLI::App *cmd, Flags &f) {
  cmd->add_option("--config", f.config, "Run configuration (JSON)")->required();
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--scorer", f.scorer, "Restrict to one registered scorer");
  cmd->add_option("--factors", f.factors, "Factor preset: group | group+template+emotion");
  cmd->add_option("--alpha", f.alpha, "Significance level for bias flags");
  cmd->add_option("--input", f.input, "Probe or comparative corpus to score/analyze");
  cmd->add_flag("--deterministic", f.deterministic, "Omit timestamps from reports");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Counterfactual bias audit for sentiment and toxicity scorers", "bits"};
  app.require_subcommand(1);
  Flags flags;
  struct Sub {
    const char *name;
    const char *help;
    bits::Stage stage;
  };
  const Sub subs[] = {
      {"generate", "Write the probe corpus", bits::Stage::kGenerate},
      {"perturb", "Write the comparative corpus from source documents", bits::Stage::kPerturb},
      {"score", "Score a corpus with the registered scorers", bits::Stage::kScore},
      {"analyze", "Fit the regression bias test on scored records", bits::Stage::kAnalyze},
      {"report", "Render mean, dispersion, significance and heatmap tables",
       bits::Stage::kReport},
      {"run", "Run every stage", bits::Stage::kRun},
  };
  std::optional<bits::Stage> chosen;
  for (const auto &s : subs) {
    CLI::App *cmd = app.add_subcommand(s.name, s.help);
    AddCommonFlags(cmd, flags);
    cmd->callback([&chosen, stage = s.stage] { chosen = stage; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    if (rc == 0) return 0;
    if (e.get_name() != "CallForHelp") std::cerr << app.help();
    return static_cast<int>(bits::ErrorClass::kConfig);
  }

  try {
    bits::RunConfig config = bits::LoadRunConfig(flags.config);
    if (!flags.out.empty()) config.out = flags.out;
    if (!flags.factors.empty()) config.preset = bits::ParsePreset(flags.factors);
    if (flags.alpha != 0.0) {
      if (!(flags.alpha > 0.0 && flags.alpha < 1.0)) {
        throw bits::Error(bits::ErrorCode::kConfig, "alpha must lie in (0, 1)");
      }
      config.alpha = flags.alpha;
    }
    if (flags.deterministic) config.deterministic = true;
    bits::StageOptions options;
    if (!flags.input.empty()) options.input = flags.input;
    if (!flags.scorer.empty()) options.scorer = flags.scorer;
    bits::RunStage(config, *chosen, options, std::cerr);
  } catch (const bits::Error &e) {
    std::cerr << "bits: " << e.what() << "\n";
    return e.exit_status();
  } catch (const std::exception &e) {
    std::cerr << "bits: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
