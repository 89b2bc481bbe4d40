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

#include "bits/tdist.h"

#include <cmath>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "bits/error.h"

namespace bits {

double TwoSidedP(double t, double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw Error(ErrorCode::kInvalidFrame, "degrees of freedom must be positive");
  }
  if (!std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidFrame, "t statistic is not finite");
  }
  if (t == 0.0) return 1.0;
  const double t2 = t * t;
  // P(|T| > |t|) = I_x(df/2, 1/2) with x = df / (df + t^2). For x close to
  // 1 the complementary form avoids cancellation in 1 - x.
  const double x = df / (df + t2);
  if (x < 0.5) return boost::math::ibeta(df / 2.0, 0.5, x);
  return boost::math::ibetac(0.5, df / 2.0, t2 / (df + t2));
}

}  // namespace bits
