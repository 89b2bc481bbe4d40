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

#ifndef BITS_OLS_H_
#define BITS_OLS_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bits {

// A categorical column. An empty value marks a row where the factor does
// not apply (e.g. emotion on a neutral sentence); such rows get zero in
// every dummy of the factor.
struct Factor {
  std::string name;
  std::vector<std::string> levels;  // declared order; empty = natural order of values
  std::string reference;            // empty = first observed level
  std::vector<std::string> values;  // one per row
};

struct FactorFrame {
  std::vector<double> y;
  std::vector<Factor> factors;

  size_t n() const { return y.size(); }
};

struct DesignMatrix {
  Eigen::MatrixXd x;
  // "(Intercept)" then "<factor>:<level>" per non-reference observed level,
  // factors in frame order, levels in declared order.
  std::vector<std::string> labels;
};

inline constexpr const char *kInterceptLabel = "(Intercept)";

// Dummy coding against each factor's reference level. Throws
// kInvalidFrame, kSingleLevelFactor or kRankDeficient.
DesignMatrix BuildDesignMatrix(const FactorFrame &frame);

// Observed levels of `factor`, ordered as the design matrix uses them,
// with the reference first.
std::vector<std::string> ObservedLevels(const Factor &factor);

struct LeastSquares {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  double tss = 0.0;  // centered total sum of squares
};

// Column-pivoted Householder QR solve. Throws kRankDeficient and
// kInsufficientRows (rows < columns).
LeastSquares SolveLeastSquares(const Eigen::MatrixXd &x, const Eigen::VectorXd &y);

struct OlsFit {
  std::vector<std::string> labels;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd p_values;  // two-sided
  int residual_df = 0;
  double rss = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares with classical inference: se from
// sigma^2 (X'X)^-1 with sigma^2 = RSS / (n - p), two-sided t p-values.
// Throws kRankDeficient, kInsufficientRows (n - p < 1) and
// kDegenerateVariance (residuals vanish, so inference is undefined).
OlsFit FitOls(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
              std::vector<std::string> labels = {});

}  // namespace bits

#endif  // BITS_OLS_H_
