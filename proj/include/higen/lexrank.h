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

#ifndef HIGEN_LEXRANK_H_
#define HIGEN_LEXRANK_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "higen/corpus.h"
#include "higen/prompts.h"

namespace higen::lexrank {

// Sparse term-frequency vector, sorted by term id.
using TermVector = std::vector<std::pair<uint32_t, double>>;

struct TfIdf {
  std::vector<std::string> vocabulary;  // term id -> token
  std::vector<double> idf;              // term id -> ln((n+1)/(df+1)) + 1
  std::vector<TermVector> tf;           // sentence -> raw counts
};

// Sentences act as documents. Tokens are lowercased alphanumeric runs with
// stopwords removed; a sentence with no surviving tokens gets an empty vector.
TfIdf ComputeTfIdf(const std::vector<corpus::Sentence>& sentences);
TfIdf ComputeTfIdf(const std::vector<std::string>& sentences);

// IDF-weighted cosine over raw term frequencies; 0 if either vector is empty.
double ModifiedCosine(const TermVector& u, const TermVector& v, std::span<const double> idf);

struct SimilarityGraph {
  size_t n = 0;
  std::vector<double> weights;  // row-major n x n
  double threshold = 0.0;

  double at(size_t i, size_t j) const { return weights[i * n + j]; }
};

struct CentralityScores {
  std::vector<double> scores;
  size_t iterations = 0;
  bool converged = false;
};

struct Params {
  double threshold = 0.1;
  double damping = 0.85;
  double tol = 1e-8;
  size_t max_iter = 200;
};

// Pairwise similarities with unit diagonal; off-diagonal entries below
// `threshold` are zeroed. Rows are computed in parallel.
SimilarityGraph BuildGraph(const TfIdf& model, double threshold);
SimilarityGraph BuildGraphSerial(const TfIdf& model, double threshold);

// Damped power iteration on the degree-normalized graph, started from the
// uniform vector; all-zero rows become uniform rows.
CentralityScores Centrality(const SimilarityGraph& graph, double damping, double tol,
                            size_t max_iter);
CentralityScores CentralitySerial(const SimilarityGraph& graph, double damping, double tol,
                                  size_t max_iter);

// Indices of the top-min(k, n) scores (ties to the smaller index), returned
// in ascending index order.
std::vector<size_t> TopK(std::span<const double> scores, size_t k);

prompts::HighlightSet Highlights(const corpus::Document& document, size_t k,
                                 const Params& params = {});

void WriteSimilarityCsv(const SimilarityGraph& graph, const std::string& path);

}  // namespace higen::lexrank

#endif  // HIGEN_LEXRANK_H_
