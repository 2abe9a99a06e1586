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

#include "higen/lexrank.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "higen/error.h"
#include "higen/resources.h"
#include "higen/text.h"

namespace higen::lexrank {
namespace {

// Below this size the OpenMP fork/join costs more than the kernel.
constexpr size_t kParallelMinSentences = 64;

double WeightedNorm(const TermVector& v, std::span<const double> idf) {
  double sq = 0.0;
  for (const auto& [term, tf] : v) {
    double w = tf * idf[term];
    sq += w * w;
  }
  return std::sqrt(sq);
}

double Dot(const TermVector& u, const TermVector& v, std::span<const double> idf) {
  double dot = 0.0;
  size_t a = 0, b = 0;
  while (a < u.size() && b < v.size()) {
    if (u[a].first < v[b].first) {
      ++a;
    } else if (v[b].first < u[a].first) {
      ++b;
    } else {
      double w = idf[u[a].first];
      dot += u[a].second * v[b].second * w * w;
      ++a;
      ++b;
    }
  }
  return dot;
}

double Similarity(const TermVector& u, double nu, const TermVector& v, double nv,
                  std::span<const double> idf) {
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(Dot(u, v, idf) / (nu * nv), 0.0, 1.0);
}

std::vector<double> Norms(const TfIdf& model) {
  std::vector<double> norms(model.tf.size());
  for (size_t i = 0; i < model.tf.size(); ++i) norms[i] = WeightedNorm(model.tf[i], model.idf);
  return norms;
}

// Row-stochastic transition matrix, transposed so column access is contiguous.
std::vector<double> TransposedTransition(const SimilarityGraph& g) {
  const size_t n = g.n;
  std::vector<double> pt(n * n);
  for (size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (size_t j = 0; j < n; ++j) degree += g.at(i, j);
    for (size_t j = 0; j < n; ++j) {
      pt[j * n + i] = degree > 0.0 ? g.at(i, j) / degree : 1.0 / static_cast<double>(n);
    }
  }
  return pt;
}

void Validate(const SimilarityGraph& graph, double damping) {
  if (graph.n == 0) throw ArgumentError("centrality requires n >= 1");
  if (!(damping > 0.0 && damping < 1.0)) throw ArgumentError("damping must be in (0, 1)");
  if (graph.weights.size() != graph.n * graph.n) throw ArgumentError("weights must be n x n");
}

void Normalize(std::vector<double>& p) {
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= sum;
}

}  // namespace

TfIdf ComputeTfIdf(const std::vector<std::string>& sentences) {
  if (sentences.empty()) throw ArgumentError("tfidf requires at least one sentence");
  const auto& stop = resources::Stopwords();
  TfIdf model;
  std::unordered_map<std::string, uint32_t> ids;
  std::vector<size_t> df;
  model.tf.resize(sentences.size());
  for (size_t s = 0; s < sentences.size(); ++s) {
    std::map<uint32_t, double> counts;
    for (auto& tok : text::Tokenize(sentences[s])) {
      if (stop.contains(tok)) continue;
      auto [it, inserted] = ids.emplace(tok, static_cast<uint32_t>(model.vocabulary.size()));
      if (inserted) {
        model.vocabulary.push_back(tok);
        df.push_back(0);
      }
      counts[it->second] += 1.0;
    }
    for (const auto& [term, c] : counts) {
      ++df[term];
      model.tf[s].emplace_back(term, c);
    }
  }
  const double n = static_cast<double>(sentences.size());
  model.idf.resize(df.size());
  for (size_t t = 0; t < df.size(); ++t) {
    model.idf[t] = std::log((n + 1.0) / (static_cast<double>(df[t]) + 1.0)) + 1.0;
  }
  return model;
}

TfIdf ComputeTfIdf(const std::vector<corpus::Sentence>& sentences) {
  std::vector<std::string> texts;
  texts.reserve(sentences.size());
  for (const auto& s : sentences) texts.push_back(s.text);
  return ComputeTfIdf(texts);
}

double ModifiedCosine(const TermVector& u, const TermVector& v, std::span<const double> idf) {
  return Similarity(u, WeightedNorm(u, idf), v, WeightedNorm(v, idf), idf);
}

SimilarityGraph BuildGraphSerial(const TfIdf& model, double threshold) {
  const size_t n = model.tf.size();
  SimilarityGraph g{n, std::vector<double>(n * n, 0.0), threshold};
  auto norms = Norms(model);
  for (size_t i = 0; i < n; ++i) {
    g.weights[i * n + i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      double s = Similarity(model.tf[i], norms[i], model.tf[j], norms[j], model.idf);
      if (s < threshold) s = 0.0;
      g.weights[i * n + j] = s;
      g.weights[j * n + i] = s;
    }
  }
  return g;
}

SimilarityGraph BuildGraph(const TfIdf& model, double threshold) {
  const size_t n = model.tf.size();
  SimilarityGraph g{n, std::vector<double>(n * n, 0.0), threshold};
  auto norms = Norms(model);
  const auto& tf = model.tf;
  std::span<const double> idf = model.idf;
  double* w = g.weights.data();
  // Each (i, j > i) pair is written by exactly one iteration, mirrored into
  // (j, i); rows are uneven so scheduling is dynamic.
#pragma omp parallel for schedule(dynamic, 8) if (n >= kParallelMinSentences)
  for (size_t i = 0; i < n; ++i) {
    w[i * n + i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      double s = Similarity(tf[i], norms[i], tf[j], norms[j], idf);
      if (s < threshold) s = 0.0;
      w[i * n + j] = s;
      w[j * n + i] = s;
    }
  }
  return g;
}

CentralityScores CentralitySerial(const SimilarityGraph& graph, double damping, double tol,
                                  size_t max_iter) {
  Validate(graph, damping);
  const size_t n = graph.n;
  const auto pt = TransposedTransition(graph);
  const double teleport = (1.0 - damping) / static_cast<double>(n);
  std::vector<double> p(n, 1.0 / static_cast<double>(n)), next(n);
  CentralityScores out;
  for (size_t it = 0; it < max_iter; ++it) {
    double change = 0.0;
    for (size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) acc += pt[j * n + i] * p[i];
      next[j] = damping * acc + teleport;
      change += std::abs(next[j] - p[j]);
    }
    p.swap(next);
    out.iterations = it + 1;
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  Normalize(p);
  out.scores = std::move(p);
  return out;
}

CentralityScores Centrality(const SimilarityGraph& graph, double damping, double tol,
                            size_t max_iter) {
  Validate(graph, damping);
  const size_t n = graph.n;
  const auto pt = TransposedTransition(graph);
  const double teleport = (1.0 - damping) / static_cast<double>(n);
  std::vector<double> p(n, 1.0 / static_cast<double>(n)), next(n);
  CentralityScores out;
  for (size_t it = 0; it < max_iter; ++it) {
    double change = 0.0;
#pragma omp parallel for reduction(+ : change) schedule(static) if (n >= kParallelMinSentences)
    for (size_t j = 0; j < n; ++j) {
      const double* col = pt.data() + j * n;
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) acc += col[i] * p[i];
      next[j] = damping * acc + teleport;
      change += std::abs(next[j] - p[j]);
    }
    p.swap(next);
    out.iterations = it + 1;
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  Normalize(p);
  out.scores = std::move(p);
  return out;
}

std::vector<size_t> TopK(std::span<const double> scores, size_t k) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  // Scores are compared at 1e-12 resolution so rounding noise cannot break
  // an intended tie.
  auto key = [&](size_t i) { return std::llround(scores[i] * 1e12); };
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return key(a) > key(b); });
  order.resize(std::min(k, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

prompts::HighlightSet Highlights(const corpus::Document& document, size_t k, const Params& params) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  prompts::HighlightSet set{"lexrank", {}, k};
  if (document.sentences.empty()) return set;
  auto model = ComputeTfIdf(document.sentences);
  auto graph = BuildGraph(model, params.threshold);
  auto centrality = Centrality(graph, params.damping, params.tol, params.max_iter);
  for (size_t idx : TopK(centrality.scores, k)) {
    set.items.push_back({document.sentences[idx].text, idx, 1.0});
  }
  return set;
}

void WriteSimilarityCsv(const SimilarityGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path);
  out.precision(17);
  for (size_t i = 0; i < graph.n; ++i) {
    for (size_t j = 0; j < graph.n; ++j) {
      if (j) out << ',';
      out << graph.at(i, j);
    }
    out << '\n';
  }
}

}  // namespace higen::lexrank
