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

#include "higen/lasso.h"

#include <algorithm>
#include <cmath>

#include "higen/error.h"

namespace higen::lasso {
namespace {

struct Centered {
  std::vector<double> columns;  // column-major, centered
  std::vector<double> means;
  std::vector<double> y;        // centered
  double y_mean = 0.0;
};

void Check(const Design& x, std::span<const double> y, double lambda) {
  if (x.rows < 2) throw ArgumentError("lasso requires at least 2 rows");
  if (y.size() != x.rows) throw ArgumentError("y length must equal the number of rows");
  if (x.values.size() != x.rows * x.cols) throw ArgumentError("design matrix shape mismatch");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw NumericError("lambda must be finite and >= 0");
  for (double v : x.values) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in design matrix");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in response");
  }
}

Centered Center(const Design& x, std::span<const double> y) {
  const size_t m = x.rows, n = x.cols;
  Centered c;
  c.columns.resize(m * n);
  c.means.assign(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (size_t i = 0; i < m; ++i) s += x.at(i, j);
    c.means[j] = s / static_cast<double>(m);
    for (size_t i = 0; i < m; ++i) c.columns[j * m + i] = x.at(i, j) - c.means[j];
  }
  for (double v : y) c.y_mean += v;
  c.y_mean /= static_cast<double>(m);
  c.y.resize(m);
  for (size_t i = 0; i < m; ++i) c.y[i] = y[i] - c.y_mean;
  return c;
}

}  // namespace

double LambdaMax(const Design& x, std::span<const double> y) {
  Check(x, y, 0.0);
  Centered c = Center(x, y);
  const size_t m = x.rows;
  double best = 0.0;
  for (size_t j = 0; j < x.cols; ++j) {
    double dot = 0.0;
    for (size_t i = 0; i < m; ++i) dot += c.columns[j * m + i] * c.y[i];
    best = std::max(best, std::abs(dot) / static_cast<double>(m));
  }
  return best;
}

Fit FitLasso(const Design& x, std::span<const double> y, double lambda, const Options& options) {
  Check(x, y, lambda);
  const size_t m = x.rows, n = x.cols;
  const double inv_m = 1.0 / static_cast<double>(m);
  Centered c = Center(x, y);

  std::vector<double> curvature(n);
  for (size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (size_t i = 0; i < m; ++i) s += c.columns[j * m + i] * c.columns[j * m + i];
    curvature[j] = s * inv_m;
  }

  Fit fit;
  fit.weights.assign(n, 0.0);
  std::vector<double> residual = c.y;
  for (size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (curvature[j] <= 1e-14) continue;
      const double* col = c.columns.data() + j * m;
      double rho = 0.0;
      for (size_t i = 0; i < m; ++i) rho += col[i] * residual[i];
      // Same rounding as LambdaMax, so lambda >= lambda_max keeps every
      // weight at exactly zero.
      rho = rho / static_cast<double>(m) + curvature[j] * fit.weights[j];
      double updated = SoftThreshold(rho, lambda) / curvature[j];
      double delta = updated - fit.weights[j];
      if (delta != 0.0) {
        for (size_t i = 0; i < m; ++i) residual[i] -= col[i] * delta;
        fit.weights[j] = updated;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    fit.sweeps = sweep + 1;
    if (max_change < options.tol) {
      fit.converged = true;
      break;
    }
  }

  fit.intercept = c.y_mean;
  for (size_t j = 0; j < n; ++j) fit.intercept -= c.means[j] * fit.weights[j];
  double sse = 0.0, sst = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sse += residual[i] * residual[i];
    sst += c.y[i] * c.y[i];
  }
  fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : 0.0;
  return fit;
}

}  // namespace higen::lasso
