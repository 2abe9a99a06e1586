/*
 * Copyright 2026 The HiGen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HIGEN_STATS_H_
#define HIGEN_STATS_H_

#include <span>

namespace higen::stats {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction,
// using the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) where the fraction
// converges slowly.
double RegularizedIncompleteBeta(double a, double b, double x);

// Two-sided Student-t tail probability P(|T| >= |t|) with df degrees of freedom.
double StudentTTwoSided(double t, double df);

struct TTestResult {
  double t = 0.0;  // NaN when the differences have zero variance
  int df = 0;
  double p = 1.0;
};

// Paired two-sided t-test on a - b. With zero-variance differences p is 1
// when the mean difference is 0 and 0 otherwise. Throws ArgumentError on a
// length mismatch or fewer than two pairs.
TTestResult PairedTTest(std::span<const double> a, std::span<const double> b);

}  // namespace higen::stats

#endif  // HIGEN_STATS_H_
