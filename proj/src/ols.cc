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

#include "bits/ols.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "bits/error.h"
#include "bits/tdist.h"
#include "bits/text_util.h"

namespace bits {

std::vector<std::string> ObservedLevels(const Factor &factor) {
  std::set<std::string> seen;
  for (const auto &v : factor.values) {
    if (!v.empty()) seen.insert(v);
  }
  std::vector<std::string> order;
  if (factor.levels.empty()) {
    order.assign(seen.begin(), seen.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const auto &a, const auto &b) { return NaturalLess(a, b); });
  } else {
    for (const auto &v : seen) {
      if (std::find(factor.levels.begin(), factor.levels.end(), v) ==
          factor.levels.end()) {
        throw Error(ErrorCode::kInvalidFrame,
                    "factor " + factor.name + ": undeclared level '" + v + "'");
      }
    }
    for (const auto &l : factor.levels) {
      if (seen.count(l)) order.push_back(l);
    }
  }
  if (!factor.reference.empty()) {
    auto it = std::find(order.begin(), order.end(), factor.reference);
    if (it == order.end()) {
      throw Error(ErrorCode::kInvalidFrame, "factor " + factor.name +
                                                ": reference level '" + factor.reference +
                                                "' not observed");
    }
    std::rotate(order.begin(), it, it + 1);
  }
  return order;
}

DesignMatrix BuildDesignMatrix(const FactorFrame &frame) {
  const size_t n = frame.n();
  for (const auto &f : frame.factors) {
    if (f.values.size() != n) {
      throw Error(ErrorCode::kInvalidFrame, "factor " + f.name + " has " +
                                                std::to_string(f.values.size()) +
                                                " values for " + std::to_string(n) + " rows");
    }
  }
  for (double v : frame.y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidFrame, "non-finite response");
  }

  DesignMatrix dm;
  dm.labels.push_back(kInterceptLabel);
  struct Column {
    size_t factor;
    std::string level;
  };
  std::vector<Column> columns;
  for (size_t fi = 0; fi < frame.factors.size(); ++fi) {
    const auto &f = frame.factors[fi];
    auto levels = ObservedLevels(f);
    if (levels.size() < 2) {
      throw Error(ErrorCode::kSingleLevelFactor,
                  "factor " + f.name + " has " + std::to_string(levels.size()) +
                      " observed level(s)");
    }
    for (size_t l = 1; l < levels.size(); ++l) {
      columns.push_back({fi, levels[l]});
      dm.labels.push_back(f.name + ":" + levels[l]);
    }
  }

  dm.x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(columns.size() + 1));
  dm.x.col(0).setOnes();
  for (size_t c = 0; c < columns.size(); ++c) {
    const auto &values = frame.factors[columns[c].factor].values;
    for (size_t r = 0; r < n; ++r) {
      if (values[r] == columns[c].level) dm.x(r, c + 1) = 1.0;
    }
  }
  if (n > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dm.x);
    if (qr.rank() < dm.x.cols()) {
      throw Error(ErrorCode::kRankDeficient,
                  "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                      std::to_string(dm.x.cols()) + " columns");
    }
  }
  return dm;
}

LeastSquares SolveLeastSquares(const Eigen::MatrixXd &x, const Eigen::VectorXd &y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kInvalidFrame, "row count mismatch");
  }
  if (x.rows() < x.cols() || x.cols() == 0) {
    throw Error(ErrorCode::kInsufficientRows,
                std::to_string(x.rows()) + " rows for " + std::to_string(x.cols()) +
                    " columns");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) {
    throw Error(ErrorCode::kRankDeficient, "rank " + std::to_string(qr.rank()) + " < " +
                                               std::to_string(x.cols()));
  }
  LeastSquares ls;
  ls.coefficients = qr.solve(y);
  ls.residuals = y - x * ls.coefficients;
  ls.rss = ls.residuals.squaredNorm();
  ls.tss = (y.array() - y.mean()).matrix().squaredNorm();
  return ls;
}

OlsFit FitOls(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
              std::vector<std::string> labels) {
  const Eigen::Index n = x.rows(), p = x.cols();
  if (n - p < 1) {
    throw Error(ErrorCode::kInsufficientRows,
                "residual degrees of freedom " + std::to_string(n - p) + " < 1");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < p) {
    throw Error(ErrorCode::kRankDeficient,
                "rank " + std::to_string(qr.rank()) + " < " + std::to_string(p));
  }
  OlsFit fit;
  fit.labels = std::move(labels);
  if (fit.labels.empty()) {
    for (Eigen::Index j = 0; j < p; ++j) fit.labels.push_back("x" + std::to_string(j));
  }
  fit.coefficients = qr.solve(y);
  const Eigen::VectorXd residuals = y - x * fit.coefficients;
  fit.rss = residuals.squaredNorm();
  const double tss = (y.array() - y.mean()).matrix().squaredNorm();
  fit.residual_df = static_cast<int>(n - p);
  // Residuals at rounding level relative to the size of y: the fit is
  // exact and standard errors are meaningless. Constant y lands here too,
  // since its centered sum of squares is itself rounding noise.
  const double scale = std::max(tss, y.squaredNorm());
  if (tss == 0.0 || fit.rss <= 1e-24 * scale) {
    throw Error(ErrorCode::kDegenerateVariance,
                "residual sum of squares is zero; p-values undefined");
  }
  fit.r_squared = 1.0 - fit.rss / tss;

  // (X'X)^-1 = P R^-1 R^-T P' for X P = Q R.
  const Eigen::MatrixXd r =
      qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd xtx_inv_perm = r_inv * r_inv.transpose();
  const auto &perm = qr.colsPermutation();
  const Eigen::MatrixXd xtx_inv = perm * xtx_inv_perm * perm.transpose();

  const double sigma2 = fit.rss / fit.residual_df;
  fit.standard_errors.resize(p);
  fit.t_stats.resize(p);
  fit.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.standard_errors(j) = std::sqrt(sigma2 * xtx_inv(j, j));
    fit.t_stats(j) = fit.coefficients(j) / fit.standard_errors(j);
    fit.p_values(j) = TwoSidedP(fit.t_stats(j), fit.residual_df);
  }
  return fit;
}

}  // namespace bits
