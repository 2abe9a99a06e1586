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

#include <gtest/gtest.h>

#include <cmath>

#include "higen/error.h"
#include "higen/stats.h"
#include "oracles.h"

namespace higen::stats {
namespace {

TEST(StudentT, CriticalValueForNineDf) {
  EXPECT_NEAR(StudentTTwoSided(2.262, 9), 0.0500, 5e-4);
  EXPECT_NEAR(StudentTTwoSided(-2.262, 9), 0.0500, 5e-4);
  EXPECT_DOUBLE_EQ(StudentTTwoSided(0.0, 9), 1.0);
}

TEST(StudentT, MatchesQuadratureOnGrid) {
  for (int df = 1; df <= 60; ++df) {
    for (int step = -40; step <= 40; ++step) {
      double t = step * 0.25;
      EXPECT_NEAR(StudentTTwoSided(t, df), oracle::StudentTailSimpson(t, df), 1e-6) << "t=" << t << " df=" << df;
    }
  }
}

TEST(IncompleteBeta, ClosedForms) {
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(RegularizedIncompleteBeta(1, 1, x), x, 1e-12);
    EXPECT_NEAR(RegularizedIncompleteBeta(3, 1, x), x * x * x, 1e-12);
    EXPECT_NEAR(RegularizedIncompleteBeta(2.5, 4, x), 1 - RegularizedIncompleteBeta(4, 2.5, 1 - x), 1e-12);
  }
}

TEST(PairedTTest, KnownDifferences) {
  std::vector<double> a = {2, 4, 6}, b = {1, 2, 3};  // differences 1, 2, 3
  auto r = PairedTTest(a, b);
  EXPECT_EQ(r.df, 2);
  EXPECT_NEAR(r.t, 2.0 / (1.0 / std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(r.p, oracle::StudentTailSimpson(r.t, 2), 1e-6);
}

TEST(PairedTTest, ZeroVarianceConventions) {
  std::vector<double> a = {1, 2, 3}, same = {1, 2, 3}, shifted = {0, 1, 2};
  auto eq = PairedTTest(a, same);
  EXPECT_TRUE(std::isnan(eq.t));
  EXPECT_EQ(eq.p, 1.0);
  auto sh = PairedTTest(a, shifted);
  EXPECT_TRUE(std::isnan(sh.t));
  EXPECT_EQ(sh.p, 0.0);
}

TEST(PairedTTest, RejectsBadInput) {
  std::vector<double> a = {1, 2}, b = {1}, one = {1};
  EXPECT_THROW(PairedTTest(a, b), ArgumentError);
  EXPECT_THROW(PairedTTest(one, one), ArgumentError);
}

}  // namespace
}  // namespace higen::stats
