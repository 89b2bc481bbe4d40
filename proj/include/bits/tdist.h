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

#ifndef BITS_TDIST_H_
#define BITS_TDIST_H_

namespace bits {

// Two-sided tail probability 2 * (1 - F(|t|; df)) of the central Student
// t distribution, evaluated through the regularized incomplete beta
// function so that tiny tails keep full relative precision.
double TwoSidedP(double t, double df);

}  // namespace bits

#endif  // BITS_TDIST_H_
