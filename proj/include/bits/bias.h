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

#ifndef BITS_BIAS_H_
#define BITS_BIAS_H_

#include <string>
#include <string_view>
#include <vector>

#include "bits/ols.h"
#include "json.hpp"

namespace bits {

inline constexpr double kDefaultAlpha = 0.001;

// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, else "".
std::string_view StarCode(double p);

struct GroupStats {
  std::string group;
  size_t n = 0;
  double mean = 0.0;
  double sample_std = 0.0;  // n - 1 denominator; 0 when n == 1
  bool single_observation = false;
};

// Per-group mean and sample standard deviation of `values`, grouped by
// the parallel `groups` column and reported in canonical group order.
// Every label in `required` must have at least one value (kEmptyGroup).
// Results do not depend on row order.
std::vector<GroupStats> ComputeGroupStats(const std::vector<std::string> &groups,
                                          const std::vector<double> &values,
                                          const std::vector<std::string> &required = {});

enum class FactorPreset {
  kGroupOnly,              // "group"
  kGroupTemplateEmotion,   // "group+template+emotion"
};
std::string_view PresetName(FactorPreset preset);
FactorPreset ParsePreset(std::string_view name);

struct Observation {
  std::string group;
  std::string template_id;
  std::string emotion;  // empty when the sentence has no sentiment slot
  double y = 0.0;
};

// Group factor against NRMA; template factor against its first level in
// natural order; emotion factor against the first observed emotion, with
// neutral rows coded as not applicable. The emotion factor is omitted
// when no row carries an emotion.
FactorFrame MakeFrame(const std::vector<Observation> &observations, FactorPreset preset);

struct CoefficientRow {
  std::string term;
  double estimate = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

struct GroupEffect {
  std::string group;
  double coefficient = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  std::string star;
  bool biased_negative = false;  // coefficient < 0 and p < alpha
};

struct BiasReport {
  std::string scorer;
  double alpha = kDefaultAlpha;
  std::string factors;  // factor names joined with '+'
  std::string reference_group;
  size_t n = 0;
  int residual_df = 0;
  double r_squared = 0.0;
  std::vector<CoefficientRow> coefficients;
  std::vector<GroupEffect> groups;
  std::vector<GroupStats> stats;
};

// Fits OLS on every factor of `frame` (which must contain "group") and
// reports the group dummies. Rows are put in a canonical order first, so
// shuffled input yields an identical report. Propagates fit errors.
BiasReport BiasTest(const FactorFrame &frame, double alpha = kDefaultAlpha,
                    std::string scorer = {});

// Significant digits kept for t statistics and p-values in the
// machine-readable report. Estimates keep full precision.
inline constexpr int kInferenceDigits = 10;

nlohmann::ordered_json BiasReportToJson(const BiasReport &report);
BiasReport BiasReportFromJson(const nlohmann::json &j);

}  // namespace bits

#endif  // BITS_BIAS_H_
