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

#include "higen/attribution.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "higen/error.h"
#include "higen/lasso.h"
#include "higen/parallel.h"

namespace higen::attribution {
namespace {

// Uniform double in [0, 1) from the top 53 bits, so draws do not depend on
// the standard library's distribution implementation.
double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string AblationMask::ToString() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

std::vector<AblationMask> SampleMasks(size_t n, size_t m, double keep_prob, uint64_t seed) {
  if (n < 1) throw ArgumentError("SampleMasks requires n >= 1");
  if (m < 2) throw ArgumentError("SampleMasks requires m >= 2");
  if (!(keep_prob > 0.0 && keep_prob < 1.0)) throw ArgumentError("keep_prob must be in (0, 1)");
  std::mt19937_64 rng(seed);
  std::vector<AblationMask> masks;
  masks.reserve(m);
  masks.push_back({std::vector<uint8_t>(n, 1)});
  while (masks.size() < m) {
    AblationMask mask{std::vector<uint8_t>(n, 0)};
    bool any = false;
    for (size_t i = 0; i < n; ++i) {
      mask.bits[i] = Uniform(rng) < keep_prob ? 1 : 0;
      any = any || mask.bits[i];
    }
    if (any) masks.push_back(std::move(mask));
  }
  return masks;
}

std::string Ablate(const corpus::Document& document, const AblationMask& mask) {
  if (mask.size() != document.size()) throw ArgumentError("mask length must equal sentence count");
  std::string out;
  for (size_t i = 0; i < document.size(); ++i) {
    if (!mask.bits[i]) continue;
    const auto& s = document.sentences[i];
    if (!out.empty()) out += ' ';
    if (document.kind == corpus::DocumentKind::kTranscript && s.speaker) out += *s.speaker + ": ";
    out += s.text;
  }
  return out;
}

double Log1mExp(double x) {
  // Two branches keep full relative precision on either side of -ln 2.
  return x > -M_LN2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

double LogitScale(double total_logprob) {
  if (std::isnan(total_logprob)) throw DomainError("log-probability is NaN");
  if (total_logprob >= 0.0) {
    throw DomainError("log-probability must be < 0 (probability-1 continuation has infinite logit)");
  }
  return total_logprob - Log1mExp(total_logprob);
}

nlohmann::json ToJson(const AttributionResult& r) {
  return {{"scores", r.scores},       {"intercept", r.intercept},
          {"lambda", r.lambda},       {"num_ablations", r.num_ablations},
          {"r_squared", r.r_squared}, {"seed", r.seed}};
}

AttributionResult Attribute(const corpus::Document& document, const std::string& response,
                            llm::LlmClient& client, const std::string& model, const Params& params,
                            const ContextBuilder& context, std::vector<AblationSample>* samples) {
  if (response.empty()) throw ArgumentError("response must be non-empty");
  const size_t n = document.size();
  if (n < 1) throw ArgumentError("document has no sentences");
  auto masks = SampleMasks(n, params.num_ablations, params.keep_prob, params.seed);

  std::vector<std::optional<double>> logits(masks.size());
  size_t workers = static_cast<size_t>(std::max(1, client.options().max_in_flight));
  ParallelFor(masks.size(), workers, [&](size_t idx) {
    std::string ablated = Ablate(document, masks[idx]);
    llm::ScoreRequest request{model, context ? context(ablated) : ablated, response};
    llm::ScoreResponse scored;
    try {
      scored = client.ScoreContinuation(request);
    } catch (const Error& e) {
      throw Error(e.kind(), "ablation mask " + std::to_string(idx) + ": " + e.what());
    }
    try {
      logits[idx] = LogitScale(scored.total_logprob);
    } catch (const DomainError&) {
      logits[idx] = std::nullopt;
    }
  });

  std::vector<size_t> kept;
  for (size_t i = 0; i < masks.size(); ++i) {
    if (logits[i]) kept.push_back(i);
  }
  if (kept.size() < n / 2 + 2) {
    throw DomainError("only " + std::to_string(kept.size()) + " ablations have a finite logit; need " +
                      std::to_string(n / 2 + 2));
  }
  lasso::Design x(kept.size(), n);
  std::vector<double> y(kept.size());
  for (size_t r = 0; r < kept.size(); ++r) {
    for (size_t c = 0; c < n; ++c) x.at(r, c) = masks[kept[r]].bits[c];
    y[r] = *logits[kept[r]];
  }
  if (samples) {
    samples->clear();
    for (size_t r = 0; r < kept.size(); ++r) samples->push_back({masks[kept[r]], y[r]});
  }
  AttributionResult result;
  result.lambda = params.lambda_frac * lasso::LambdaMax(x, y);
  auto fit = lasso::FitLasso(x, y, result.lambda);
  result.scores = std::move(fit.weights);
  result.intercept = fit.intercept;
  result.r_squared = fit.r_squared;
  result.num_ablations = kept.size();
  result.seed = params.seed;
  return result;
}

void WriteSamplesJsonl(const std::vector<AblationSample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path);
  for (const auto& s : samples) {
    out << nlohmann::json{{"mask", s.mask.ToString()}, {"logit", s.logit}}.dump() << '\n';
  }
}

prompts::HighlightSet Highlights(const AttributionResult& result, const corpus::Document& document,
                                 size_t k) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (result.scores.size() != document.size()) {
    throw ArgumentError("attribution scores do not match the document's sentence count");
  }
  std::vector<size_t> positive;
  for (size_t i = 0; i < result.scores.size(); ++i) {
    if (result.scores[i] > 0.0) positive.push_back(i);
  }
  std::stable_sort(positive.begin(), positive.end(),
                   [&](size_t a, size_t b) { return result.scores[a] > result.scores[b]; });
  positive.resize(std::min(k, positive.size()));
  std::sort(positive.begin(), positive.end());
  prompts::HighlightSet set{"contextcite", {}, k};
  for (size_t idx : positive) set.items.push_back({document.sentences[idx].text, idx, 1.0});
  return set;
}

}  // namespace higen::attribution
