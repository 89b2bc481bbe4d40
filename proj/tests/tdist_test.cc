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

#include "bits/error.h"
#include "doctest.h"
#include "oracles.h"

namespace bits {
namespace {

double RelErr(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

TEST_CASE("t tails against closed forms") {
  for (double t : {0.01, 0.5, 1.0, 2.0, 3.7, 12.0, 1e3, 1e6}) {
    INFO("t = " << t);
    CHECK(RelErr(TwoSidedP(t, 1.0), testing::CauchyTwoSidedP(t)) < 1e-10);
    CHECK(RelErr(TwoSidedP(t, 2.0), testing::TwoDfTwoSidedP(t)) < 1e-10);
  }
  CHECK(TwoSidedP(0.0, 5.0) == 1.0);
  CHECK(RelErr(TwoSidedP(2.5, 2.0), 0.1296117202215108) < 1e-12);
}

TEST_CASE("t tails against reference values") {
  CHECK(RelErr(TwoSidedP(1.224744871391589, 4.0), 0.2878641347266908) < 1e-10);
  CHECK(RelErr(TwoSidedP(1.96, 1e6), 0.04999606758526978) < 1e-10);
  CHECK(RelErr(TwoSidedP(10.0, 30.0), 4.5752514082296097e-11) < 1e-8);
}

TEST_CASE("large df approaches the normal") {
  for (double z : {0.3, 1.0, 1.96, 3.0, 5.0}) {
    CHECK(RelErr(TwoSidedP(z, 1e9), testing::NormalTwoSidedP(z)) < 1e-6);
  }
}

TEST_CASE("t tails are symmetric, monotone and bounded") {
  double prev = 1.0;
  for (double t = 0.0; t < 40.0; t += 0.25) {
    double p = TwoSidedP(t, 17.0);
    CHECK(p == TwoSidedP(-t, 17.0));
    CHECK(p <= prev);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
  // Tiny tails keep relative precision instead of collapsing to zero.
  CHECK(TwoSidedP(30.0, 2000.0) > 0.0);
  CHECK(TwoSidedP(30.0, 2000.0) < 1e-100);
  CHECK(RelErr(TwoSidedP(1e5, 1.0), testing::CauchyTwoSidedP(1e5)) < 1e-8);
}

TEST_CASE("t tails reject invalid arguments") {
  CHECK_THROWS_AS(TwoSidedP(1.0, 0.0), Error);
  CHECK_THROWS_AS(TwoSidedP(1.0, -3.0), Error);
  CHECK_THROWS_AS(TwoSidedP(NAN, 3.0), Error);
}

}  // namespace
}  // namespace bits
