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

#include "bits/bias.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "bits/error.h"
#include "bits/lexicon.h"
#include "bits/text_util.h"

namespace bits {

using ordered_json = nlohmann::ordered_json;

std::string_view StarCode(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::vector<GroupStats> ComputeGroupStats(const std::vector<std::string> &groups,
                                          const std::vector<double> &values,
                                          const std::vector<std::string> &required) {
  if (groups.size() != values.size()) {
    throw Error(ErrorCode::kInvalidFrame, "group and value columns differ in length");
  }
  std::map<std::string, std::vector<double>> by_group;
  for (const auto &g : required) by_group[g];
  for (size_t i = 0; i < groups.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidFrame, "non-finite value in group " + groups[i]);
    }
    by_group[groups[i]].push_back(values[i]);
  }
  std::vector<GroupStats> out;
  for (auto &[group, v] : by_group) {
    if (v.empty()) throw Error(ErrorCode::kEmptyGroup, "group " + group + " has no records");
    std::sort(v.begin(), v.end());
    GroupStats s;
    s.group = group;
    s.n = v.size();
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(s.n);
    if (s.n == 1) {
      s.single_observation = true;
    } else {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean) * (x - s.mean);
      s.sample_std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto &a, const auto &b) { return GroupLess(a.group, b.group); });
  return out;
}

std::string_view PresetName(FactorPreset preset) {
  return preset == FactorPreset::kGroupOnly ? "group" : "group+template+emotion";
}

FactorPreset ParsePreset(std::string_view name) {
  if (name == "group") return FactorPreset::kGroupOnly;
  if (name == "group+template+emotion" || name == "full") {
    return FactorPreset::kGroupTemplateEmotion;
  }
  throw Error(ErrorCode::kConfig, "unknown factor preset '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> SortedDistinct(std::vector<std::string> v,
                                        bool (*less)(std::string_view, std::string_view)) {
  v.erase(std::remove(v.begin(), v.end(), std::string()), v.end());
  std::sort(v.begin(), v.end(), [less](const auto &a, const auto &b) { return less(a, b); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool NaturalLessView(std::string_view a, std::string_view b) { return NaturalLess(a, b); }

}  // namespace

FactorFrame MakeFrame(const std::vector<Observation> &observations, FactorPreset preset) {
  FactorFrame frame;
  Factor group{"group", {}, std::string(kReferenceGroup), {}};
  Factor tpl{"template", {}, {}, {}};
  Factor emotion{"emotion", {}, {}, {}};
  for (const auto &o : observations) {
    frame.y.push_back(o.y);
    group.values.push_back(o.group);
    tpl.values.push_back(o.template_id);
    emotion.values.push_back(o.emotion);
  }
  group.levels = SortedDistinct(group.values, GroupLess);
  frame.factors.push_back(std::move(group));
  if (preset == FactorPreset::kGroupTemplateEmotion) {
    tpl.levels = SortedDistinct(tpl.values, NaturalLessView);
    frame.factors.push_back(std::move(tpl));
    emotion.levels = SortedDistinct(emotion.values, EmotionLess);
    if (!emotion.levels.empty()) frame.factors.push_back(std::move(emotion));
  }
  return frame;
}

namespace {

// Sorts rows by every factor value, then by response.
FactorFrame Canonicalize(const FactorFrame &frame) {
  std::vector<size_t> order(frame.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    for (const auto &f : frame.factors) {
      if (f.values[a] != f.values[b]) return f.values[a] < f.values[b];
    }
    return frame.y[a] < frame.y[b];
  });
  FactorFrame out;
  out.factors = frame.factors;
  out.y.reserve(frame.n());
  for (size_t i : order) out.y.push_back(frame.y[i]);
  for (size_t fi = 0; fi < frame.factors.size(); ++fi) {
    for (size_t k = 0; k < order.size(); ++k) {
      out.factors[fi].values[k] = frame.factors[fi].values[order[k]];
    }
  }
  return out;
}

}  // namespace

BiasReport BiasTest(const FactorFrame &input, double alpha, std::string scorer) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kConfig, "alpha must lie in (0, 1)");
  }
  for (const auto &f : input.factors) {
    if (f.values.size() != input.n()) {
      throw Error(ErrorCode::kInvalidFrame, "factor " + f.name + " length mismatch");
    }
  }
  auto group_it = std::find_if(input.factors.begin(), input.factors.end(),
                               [](const Factor &f) { return f.name == "group"; });
  if (group_it == input.factors.end()) {
    throw Error(ErrorCode::kInvalidFrame, "frame has no group factor");
  }
  const FactorFrame frame = Canonicalize(input);
  const Factor &group = *std::find_if(frame.factors.begin(), frame.factors.end(),
                                      [](const Factor &f) { return f.name == "group"; });

  DesignMatrix dm = BuildDesignMatrix(frame);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
      frame.y.data(), static_cast<Eigen::Index>(frame.n()));
  OlsFit fit = FitOls(dm.x, y, dm.labels);

  BiasReport report;
  report.scorer = std::move(scorer);
  report.alpha = alpha;
  for (const auto &f : frame.factors) {
    report.factors += (report.factors.empty() ? "" : "+") + f.name;
  }
  const auto levels = ObservedLevels(group);
  report.reference_group = levels.front();
  report.n = frame.n();
  report.residual_df = fit.residual_df;
  report.r_squared = fit.r_squared;
  for (size_t j = 0; j < fit.labels.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    report.coefficients.push_back({fit.labels[j], fit.coefficients(jj),
                                   fit.standard_errors(jj), fit.t_stats(jj),
                                   fit.p_values(jj)});
  }
  for (size_t l = 1; l < levels.size(); ++l) {
    const std::string label = "group:" + levels[l];
    auto it = std::find(fit.labels.begin(), fit.labels.end(), label);
    const auto j = static_cast<Eigen::Index>(it - fit.labels.begin());
    GroupEffect e;
    e.group = levels[l];
    e.coefficient = fit.coefficients(j);
    e.std_error = fit.standard_errors(j);
    e.t_stat = fit.t_stats(j);
    e.p_value = fit.p_values(j);
    e.star = std::string(StarCode(e.p_value));
    e.biased_negative = e.coefficient < 0.0 && e.p_value < alpha;
    report.groups.push_back(std::move(e));
  }
  report.stats = ComputeGroupStats(group.values, frame.y);
  return report;
}

namespace {

double Inference(double v) { return RoundSignificant(v, kInferenceDigits); }

}  // namespace

ordered_json BiasReportToJson(const BiasReport &r) {
  ordered_json j;
  j["scorer"] = r.scorer;
  j["alpha"] = r.alpha;
  j["factors"] = r.factors;
  j["reference_group"] = r.reference_group;
  j["n"] = r.n;
  j["residual_df"] = r.residual_df;
  j["r_squared"] = r.r_squared;
  j["inference_digits"] = kInferenceDigits;
  ordered_json groups = ordered_json::array();
  for (const auto &g : r.groups) {
    ordered_json e;
    e["group"] = g.group;
    e["coefficient"] = g.coefficient;
    e["std_error"] = g.std_error;
    e["t_stat"] = Inference(g.t_stat);
    e["p_value"] = Inference(g.p_value);
    e["star"] = g.star;
    e["biased_negative"] = g.biased_negative;
    groups.push_back(std::move(e));
  }
  j["groups"] = std::move(groups);
  ordered_json stats = ordered_json::array();
  for (const auto &s : r.stats) {
    ordered_json e;
    e["group"] = s.group;
    e["n"] = s.n;
    e["mean"] = s.mean;
    e["sample_std"] = s.sample_std;
    e["single_observation"] = s.single_observation;
    stats.push_back(std::move(e));
  }
  j["group_stats"] = std::move(stats);
  ordered_json coefs = ordered_json::array();
  for (const auto &c : r.coefficients) {
    ordered_json e;
    e["term"] = c.term;
    e["estimate"] = c.estimate;
    e["std_error"] = c.std_error;
    e["t_stat"] = Inference(c.t_stat);
    e["p_value"] = Inference(c.p_value);
    coefs.push_back(std::move(e));
  }
  j["coefficients"] = std::move(coefs);
  return j;
}

BiasReport BiasReportFromJson(const nlohmann::json &j) {
  BiasReport r;
  try {
    r.scorer = j.at("scorer").get<std::string>();
    r.alpha = j.at("alpha").get<double>();
    r.factors = j.at("factors").get<std::string>();
    r.reference_group = j.at("reference_group").get<std::string>();
    r.n = j.at("n").get<size_t>();
    r.residual_df = j.at("residual_df").get<int>();
    r.r_squared = j.at("r_squared").get<double>();
    for (const auto &e : j.at("groups")) {
      GroupEffect g;
      g.group = e.at("group").get<std::string>();
      g.coefficient = e.at("coefficient").get<double>();
      g.std_error = e.at("std_error").get<double>();
      g.t_stat = e.at("t_stat").get<double>();
      g.p_value = e.at("p_value").get<double>();
      g.star = e.at("star").get<std::string>();
      g.biased_negative = e.at("biased_negative").get<bool>();
      r.groups.push_back(std::move(g));
    }
    for (const auto &e : j.at("group_stats")) {
      GroupStats s;
      s.group = e.at("group").get<std::string>();
      s.n = e.at("n").get<size_t>();
      s.mean = e.at("mean").get<double>();
      s.sample_std = e.at("sample_std").get<double>();
      s.single_observation = e.at("single_observation").get<bool>();
      r.stats.push_back(std::move(s));
    }
    for (const auto &e : j.at("coefficients")) {
      r.coefficients.push_back({e.at("term").get<std::string>(),
                                e.at("estimate").get<double>(),
                                e.at("std_error").get<double>(),
                                e.at("t_stat").get<double>(),
                                e.at("p_value").get<double>()});
    }
  } catch (const nlohmann::json::exception &ex) {
    throw Error(ErrorCode::kParse, std::string("bias report: ") + ex.what());
  }
  return r;
}

}  // namespace bits
