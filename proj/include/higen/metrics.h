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

#ifndef HIGEN_METRICS_H_
#define HIGEN_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "higen/llm_client.h"
#include "higen/text.h"

namespace higen::metrics {

// Lowercase, split on non-alphanumeric runs, drop empties.
inline std::vector<std::string> Tokenize(std::string_view text) { return text::Tokenize(text); }

// Longest common subsequence length; O(|a||b|) time, O(min(|a|,|b|)) space.
size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeScore RougeL(std::string_view candidate, std::string_view reference);

// Scores many (candidate, reference) pairs; pairs are distributed over
// OpenMP threads.
std::vector<RougeScore> RougeLBatch(const std::vector<std::pair<std::string, std::string>>& pairs);
std::vector<RougeScore> RougeLBatchSerial(const std::vector<std::pair<std::string, std::string>>& pairs);

// |Tokenize(text)|.
size_t SummaryTokens(std::string_view text);

enum class Verdict { kSupported, kUnsupported, kUnparseable };
std::string_view VerdictName(Verdict v);

struct JudgeConfig {
  std::string model;
  int64_t max_tokens = 512;
  size_t chunk_tokens = 6000;
  size_t chunk_overlap = 500;
  size_t max_parallel = 4;
};

struct FactReport {
  std::vector<std::pair<std::string, Verdict>> facts;
  // supported / (supported + unsupported); absent when extraction failed or
  // no verdict was parseable.
  std::optional<double> score;
  std::optional<std::string> error;
};

// Reads the last "Answer: yes|no" line; anything else is unparseable.
Verdict ParseVerdict(std::string_view response);

// Overlapping windows of `chunk_tokens` tokens, `overlap` tokens shared
// between neighbours. Returns byte ranges of `text`.
std::vector<std::string_view> ChunkByTokens(std::string_view text, size_t chunk_tokens, size_t overlap);

// Throws ParseError/transport errors on failure. An empty summary yields no
// facts and no judge call.
std::vector<std::string> ExtractFacts(std::string_view summary, llm::LlmClient& judge,
                                      const JudgeConfig& config);

// Supported if any chunk of the document supports the statement.
Verdict VerifyFact(std::string_view statement, std::string_view document, llm::LlmClient& judge,
                   const JudgeConfig& config);

FactReport FactScore(std::string_view summary, std::string_view document, llm::LlmClient& judge,
                     const JudgeConfig& config);

// JSONL of {"doc_id": string, "score": number}. Throws DatasetError on a
// malformed line or duplicate doc_id.
std::map<std::string, double> LoadExternalScores(const std::string& path);

}  // namespace higen::metrics

#endif  // HIGEN_METRICS_H_
