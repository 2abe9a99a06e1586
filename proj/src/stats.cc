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

#include "higen/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "higen/error.h"

namespace higen::stats {
namespace {

double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete beta requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta requires x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTTwoSided(double t, double df) {
  if (!(df > 0.0)) throw DomainError("degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(RegularizedIncompleteBeta(df / 2.0, 0.5, x), 0.0, 1.0);
}

TTestResult PairedTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("paired t-test needs equal-length samples");
  const size_t n = a.size();
  if (n < 2) throw ArgumentError("paired t-test needs at least 2 pairs");
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dev = (a[i] - b[i]) - mean;
    ss += dev * dev;
  }
  TTestResult r;
  r.df = static_cast<int>(n) - 1;
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    r.t = std::numeric_limits<double>::quiet_NaN();
    r.p = mean == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.t = mean * std::sqrt(static_cast<double>(n)) / sd;
  r.p = StudentTTwoSided(r.t, r.df);
  return r;
}

}  // namespace higen::stats
