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

#ifndef HIGEN_ATTRIBUTION_H_
#define HIGEN_ATTRIBUTION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "higen/corpus.h"
#include "higen/llm_client.h"
#include "higen/prompts.h"
#include "json.hpp"

namespace higen::attribution {

// bits[i] == 1 keeps sentence i.
struct AblationMask {
  std::vector<uint8_t> bits;

  size_t size() const { return bits.size(); }
  std::string ToString() const;
};

// mask[0] is all ones; the remaining m - 1 masks draw each bit from
// Bernoulli(keep_prob) using a seeded mt19937_64, redrawing all-zero masks.
std::vector<AblationMask> SampleMasks(size_t n, size_t m, double keep_prob, uint64_t seed);

// Kept sentences in document order, separated by single spaces.
std::string Ablate(const corpus::Document& document, const AblationMask& mask);

// log(p / (1 - p)) for p = exp(total_logprob), evaluated in log space.
// Throws DomainError for total_logprob >= 0.
double LogitScale(double total_logprob);

// log(1 - exp(x)) for x < 0.
double Log1mExp(double x);

struct Params {
  size_t num_ablations = 64;
  double keep_prob = 0.5;
  double lambda_frac = 0.01;
  uint64_t seed = 0;
};

struct AttributionResult {
  std::vector<double> scores;
  double intercept = 0.0;
  double lambda = 0.0;
  size_t num_ablations = 0;
  double r_squared = 0.0;
  uint64_t seed = 0;
};

nlohmann::json ToJson(const AttributionResult& r);

// Maps an ablated document text to the scoring context (e.g. a rendered
// prompt). Identity by default.
using ContextBuilder = std::function<std::string(const std::string& ablated_text)>;

struct AblationSample {
  AblationMask mask;
  double logit = 0.0;
};

// Scores `response` under every ablated context, logit-scales the totals and
// fits a LASSO surrogate with lambda = lambda_frac * lambda_max. Masks whose
// score maps outside the logit domain are dropped; fewer than n/2 + 2
// surviving samples is an error. `samples`, if given, receives the
// (mask, logit) pairs used in the fit.
AttributionResult Attribute(const corpus::Document& document, const std::string& response,
                            llm::LlmClient& client, const std::string& model, const Params& params,
                            const ContextBuilder& context = {},
                            std::vector<AblationSample>* samples = nullptr);

// One line per sample: {"mask": "0110...", "logit": x}.
void WriteSamplesJsonl(const std::vector<AblationSample>& samples, const std::string& path);

// Strictly positive scores ranked descending (ties to the smaller index),
// capped at k, emitted in document order.
prompts::HighlightSet Highlights(const AttributionResult& result,
                                 const corpus::Document& document, size_t k);

}  // namespace higen::attribution

#endif  // HIGEN_ATTRIBUTION_H_
