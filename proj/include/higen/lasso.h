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

#ifndef HIGEN_LASSO_H_
#define HIGEN_LASSO_H_

#include <cstddef>
#include <span>
#include <vector>

namespace higen::lasso {

// Dense row-major design matrix.
struct Design {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> values;

  Design() = default;
  Design(size_t r, size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(size_t i, size_t j) { return values[i * cols + j]; }
  double at(size_t i, size_t j) const { return values[i * cols + j]; }
};

struct Fit {
  std::vector<double> weights;
  double intercept = 0.0;
  // Training-set R^2; 0 when y has no variance.
  double r_squared = 0.0;
  size_t sweeps = 0;
  bool converged = false;
};

struct Options {
  double tol = 1e-9;  // max absolute coordinate change per sweep
  size_t max_sweeps = 10000;
};

// Smallest lambda for which every weight is zero: max_j |Xc_j^T (y - ybar)| / m
// with Xc the column-centered design.
double LambdaMax(const Design& x, std::span<const double> y);

// Minimizes (1/2m)||y - b - Xw||^2 + lambda ||w||_1 by cyclic coordinate
// descent with soft-thresholding; the intercept is unpenalized. Constant
// columns keep weight 0. Throws NumericError on non-finite input.
Fit FitLasso(const Design& x, std::span<const double> y, double lambda, const Options& options = {});

inline double SoftThreshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace higen::lasso

#endif  // HIGEN_LASSO_H_
