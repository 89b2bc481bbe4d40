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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "bits/text_util.h"
#include "doctest.h"
#include "json.hpp"
#include "test_data.h"

namespace bits {
namespace {

namespace fs = std::filesystem;

int Run(const std::string &args) {
  const std::string cmd = std::string(BITS_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Config() { return testing::DataPath("config.json").string(); }

// Copies the shipped config with `patch` merged in, keeping data paths absolute.
fs::path PatchedConfig(const fs::path &dir, const nlohmann::json &patch) {
  auto j = nlohmann::json::parse(ReadFile(Config()));
  for (const char *key : {"templates", "groups", "emotions", "articles", "sources"}) {
    j[key] = testing::DataPath(j[key].get<std::string>()).string();
  }
  j["scorers"][0]["lexicon"] = testing::DataPath("valence_lexicon.json").string();
  j.merge_patch(patch);
  fs::path path = dir / "config.json";
  WriteFile(path, j.dump(2));
  return path;
}

TEST_CASE("run writes every stage file") {
  auto out = testing::TempDir("cli_run");
  REQUIRE(Run("run --config " + Config() + " --out " + out.string() + " --deterministic") == 0);
  for (const char *f : {"corpus.jsonl", "scores.jsonl", "bias_report.json", "report/report.md",
                        "report/report.json", "report/means_by_model.csv",
                        "social/comparative.jsonl", "social/bias_report.json"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
  }
  auto report = nlohmann::json::parse(ReadFile(out / "bias_report.json"));
  CHECK(report["reports"].is_array());
  fs::remove_all(out);
}

TEST_CASE("stages run separately and read only stage files") {
  auto out = testing::TempDir("cli_stages");
  const std::string base = "--config " + Config() + " --out " + out.string();
  CHECK(Run("analyze " + base) == 3);
  CHECK(Run("report " + base) == 3);
  REQUIRE(Run("generate " + base) == 0);
  const std::string first = ReadFile(out / "corpus.jsonl");
  REQUIRE(Run("generate " + base) == 0);
  CHECK(ReadFile(out / "corpus.jsonl") == first);
  CHECK(Run("analyze " + base) == 3);
  REQUIRE(Run("score " + base) == 0);
  REQUIRE(Run("analyze " + base + " --factors group") == 0);
  REQUIRE(Run("report " + base + " --deterministic") == 0);
  CHECK(fs::exists(out / "report" / "report.md"));
  CHECK(Run("score " + base + " --scorer nope") == 2);
  fs::remove_all(out);
}

TEST_CASE("usage and configuration errors exit with status 2") {
  CHECK(Run("") == 2);
  CHECK(Run("run --config " + Config() + " --no-such-flag") == 2);
  CHECK(Run("run") == 2);
  CHECK(Run("run --config /nonexistent/config.json") == 2);
  CHECK(Run("run --config " + Config() + " --factors everything") == 2);
  CHECK(Run("run --config " + Config() + " --alpha 2") == 2);
  CHECK(Run("--help") == 0);

  auto dir = testing::TempDir("cli_bad");
  WriteFile(dir / "config.json", "{ not json");
  CHECK(Run("run --config " + (dir / "config.json").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("external scorers run through the cli") {
  auto dir = testing::TempDir("cli_ext");
  nlohmann::json scorers = nlohmann::json::array();
  scorers.push_back({{"name", "adapter_valence"},
                     {"kind", "sentiment"},
                     {"native_range", {-1.0, 1.0}},
                     {"transport", "external_process"},
                     {"command", {BITS_FAKE_ADAPTER, "valence"}},
                     {"workers", 2}});
  scorers.push_back({{"name", "adapter_tox"},
                     {"kind", "toxicity"},
                     {"native_range", {0.0, 1.0}},
                     {"transport", "external_process"},
                     {"command", {BITS_FAKE_ADAPTER, "constant", "0.1"}}});
  auto config = PatchedConfig(dir, {{"scorers", scorers}, {"out", (dir / "out").string()}});
  // A constant scorer leaves no residual variance.
  CHECK(Run("run --config " + config.string() + " --deterministic") == 5);
  REQUIRE(fs::exists(dir / "out" / "scores.jsonl"));

  scorers.erase(1);
  config = PatchedConfig(dir, {{"scorers", scorers}, {"out", (dir / "out").string()}});
  CHECK(Run("run --config " + config.string() + " --deterministic") == 0);

  scorers[0]["command"] = {BITS_FAKE_ADAPTER, "wrong-id"};
  config = PatchedConfig(dir, {{"scorers", scorers}, {"out", (dir / "out2").string()}});
  CHECK(Run("run --config " + config.string()) == 4);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace bits
