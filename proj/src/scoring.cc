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

#include "bits/scoring.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bits/error.h"
#include "bits/text_util.h"
#include "json.hpp"

namespace bits {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view ScorerKindName(ScorerKind kind) {
  return kind == ScorerKind::kToxicity ? "toxicity" : "sentiment";
}

std::string_view TransportName(Transport transport) {
  switch (transport) {
    case Transport::kBuiltin: return "builtin";
    case Transport::kExternalProcess: return "external_process";
    case Transport::kFileBatch: return "file_batch";
  }
  return "builtin";
}

void ValidateDescriptor(const ScorerDescriptor &desc) {
  if (desc.name.empty()) throw Error(ErrorCode::kConfig, "scorer without a name");
  if (!std::isfinite(desc.native_lo) || !std::isfinite(desc.native_hi) ||
      !(desc.native_lo < desc.native_hi)) {
    throw Error(ErrorCode::kConfig, "scorer " + desc.name + ": native range needs lo < hi");
  }
}

double Standardize(double raw, const ScorerDescriptor &desc, bool *clamped) {
  if (!std::isfinite(raw)) {
    throw Error(ErrorCode::kNonFiniteScore, "scorer " + desc.name + " produced " +
                                                FormatExact(raw));
  }
  bool out_of_range = raw < desc.native_lo || raw > desc.native_hi;
  if (clamped) *clamped = out_of_range;
  double x = std::clamp(raw, desc.native_lo, desc.native_hi);
  double unit = (x - desc.native_lo) / (desc.native_hi - desc.native_lo);
  if (desc.kind == ScorerKind::kToxicity) return unit == 0.0 ? 0.0 : -unit;
  return 2.0 * unit - 1.0;
}

ValenceLexicon ValenceLexicon::FromJson(std::string_view text) {
  ValenceLexicon lex;
  try {
    auto j = json::parse(text);
    lex.negation_window = j.value("negation_window", 3);
    for (const auto &n : j.value("negators", json::array())) {
      lex.negators.insert(AsciiLower(n.get<std::string>()));
    }
    for (const auto &[token, valence] : j.at("entries").items()) {
      lex.entries[AsciiLower(token)] = valence.get<double>();
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, std::string("valence lexicon: ") + e.what());
  }
  lex.Validate();
  return lex;
}

ValenceLexicon ValenceLexicon::Load(const std::filesystem::path &path) {
  return FromJson(ReadFile(path));
}

void ValenceLexicon::Validate() const {
  if (negation_window < 1) throw Error(ErrorCode::kConfig, "negation_window must be >= 1");
  for (const auto &[token, v] : entries) {
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
      throw Error(ErrorCode::kConfig, "valence of '" + token + "' outside [-1, 1]");
    }
    if (negators.count(token)) {
      throw Error(ErrorCode::kConfig, "'" + token + "' is both negator and entry");
    }
  }
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && cur.back() == '\'') cur.pop_back();
    size_t lead = cur.find_first_not_of('\'');
    if (lead != std::string::npos && !cur.empty()) tokens.push_back(cur.substr(lead));
    cur.clear();
  };
  for (char c : text) {
    if (IsAsciiAlpha(c) || IsAsciiDigit(c) || c == '\'' ||
        static_cast<unsigned char>(c) >= 0x80) {
      cur += AsciiToLower(c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

double ScoreBuiltin(std::string_view text, const ValenceLexicon &lexicon) {
  const auto tokens = Tokenize(text);
  double sum = 0.0;
  int matches = 0;
  for (size_t k = 0; k < tokens.size(); ++k) {
    auto it = lexicon.entries.find(tokens[k]);
    if (it == lexicon.entries.end()) continue;
    double v = it->second;
    size_t from = k >= static_cast<size_t>(lexicon.negation_window)
                      ? k - lexicon.negation_window
                      : 0;
    for (size_t m = from; m < k; ++m) {
      if (lexicon.negators.count(tokens[m])) {
        v = -v;
        break;
      }
    }
    sum += v;
    ++matches;
  }
  if (matches == 0) return 0.0;
  return std::clamp(sum / matches, -1.0, 1.0);
}

namespace {

std::filesystem::path Resolve(const std::filesystem::path &base, const std::string &p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::vector<RegisteredScorer> ParseRegistry(std::string_view text,
                                            const std::filesystem::path &base_dir) {
  std::vector<RegisteredScorer> out;
  std::set<std::string> names;
  try {
    auto j = json::parse(text);
    if (!j.is_array()) throw Error(ErrorCode::kConfig, "scorer registry must be an array");
    for (const auto &e : j) {
      RegisteredScorer s;
      auto &d = s.descriptor;
      d.name = e.at("name").get<std::string>();
      std::string kind = e.value("kind", std::string("sentiment"));
      if (kind == "sentiment") {
        d.kind = ScorerKind::kSentiment;
      } else if (kind == "toxicity") {
        d.kind = ScorerKind::kToxicity;
      } else {
        throw Error(ErrorCode::kConfig, "scorer " + d.name + ": unknown kind " + kind);
      }
      std::vector<double> range = e.value(
          "native_range", d.kind == ScorerKind::kToxicity ? std::vector<double>{0.0, 1.0}
                                                          : std::vector<double>{-1.0, 1.0});
      if (range.size() != 2) {
        throw Error(ErrorCode::kConfig, "scorer " + d.name + ": native_range needs 2 values");
      }
      d.native_lo = range[0];
      d.native_hi = range[1];
      std::string transport = e.value("transport", std::string("builtin"));
      auto &ep = s.endpoint;
      if (transport == "builtin") {
        d.transport = Transport::kBuiltin;
        ep.lexicon = Resolve(base_dir, e.at("lexicon").get<std::string>());
      } else if (transport == "external_process") {
        d.transport = Transport::kExternalProcess;
        ep.command = e.at("command").get<std::vector<std::string>>();
        if (ep.command.empty()) {
          throw Error(ErrorCode::kConfig, "scorer " + d.name + ": empty command");
        }
      } else if (transport == "file_batch") {
        d.transport = Transport::kFileBatch;
        ep.request_file = Resolve(base_dir, e.at("request_file").get<std::string>());
        ep.response_file = Resolve(base_dir, e.at("response_file").get<std::string>());
      } else {
        throw Error(ErrorCode::kConfig, "scorer " + d.name + ": unknown transport " +
                                            transport);
      }
      ep.batch_size = e.value("batch_size", size_t{64});
      ep.timeout_ms = e.value("timeout_ms", 30000);
      ep.workers = e.value("workers", 1);
      if (ep.batch_size == 0 || ep.timeout_ms <= 0 || ep.workers < 1) {
        throw Error(ErrorCode::kConfig, "scorer " + d.name + ": invalid batch settings");
      }
      ValidateDescriptor(d);
      if (!names.insert(d.name).second) {
        throw Error(ErrorCode::kConfig, "duplicate scorer name " + d.name);
      }
      out.push_back(std::move(s));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, std::string("scorer registry: ") + e.what());
  }
  return out;
}

std::string SerializeScores(const std::vector<ScoreRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    ordered_json j;
    j["sentence_id"] = r.sentence_id;
    j["scorer"] = r.scorer_name;
    j["raw"] = r.raw;
    j["standardized"] = r.standardized;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<ScoreRecord> ParseScores(std::string_view content, std::string_view origin) {
  std::vector<ScoreRecord> records;
  std::istringstream in{std::string(content)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    ScoreRecord r;
    try {
      auto j = json::parse(line);
      r.sentence_id = j.at("sentence_id").get<std::string>();
      r.scorer_name = j.at("scorer").get<std::string>();
      r.raw = j.at("raw").get<double>();
      r.standardized = j.at("standardized").get<double>();
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kParse,
                  std::string(origin) + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!std::isfinite(r.standardized)) {
      throw Error(ErrorCode::kNonFiniteScore, std::string(origin) + ":" +
                                                  std::to_string(lineno));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ScoreRecord> ReadScores(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingStageOutput,
                path.string() + " does not exist; run the score stage first");
  }
  return ParseScores(ReadFile(path), path.string());
}

}  // namespace bits
