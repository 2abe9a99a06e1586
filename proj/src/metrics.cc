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

#include "higen/metrics.h"

#include <fstream>
#include <regex>

#include "higen/error.h"
#include "higen/parallel.h"
#include "higen/prompts.h"
#include "higen/resources.h"
#include "json.hpp"

namespace higen::metrics {
namespace {

RougeScore FromLcs(size_t lcs, size_t candidate_len, size_t reference_len) {
  RougeScore s;
  if (candidate_len == 0 || reference_len == 0) return s;
  s.precision = static_cast<double>(lcs) / static_cast<double>(candidate_len);
  s.recall = static_cast<double>(lcs) / static_cast<double>(reference_len);
  if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

}  // namespace

size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto& longer = a.size() >= b.size() ? a : b;
  const auto& shorter = a.size() >= b.size() ? b : a;
  std::vector<size_t> row(shorter.size() + 1, 0);
  for (const auto& tok : longer) {
    size_t diag = 0;  // row[j - 1] of the previous iteration
    for (size_t j = 1; j <= shorter.size(); ++j) {
      size_t up = row[j];
      row[j] = tok == shorter[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[shorter.size()];
}

RougeScore RougeL(std::string_view candidate, std::string_view reference) {
  auto c = Tokenize(candidate);
  auto r = Tokenize(reference);
  return FromLcs(LcsLength(c, r), c.size(), r.size());
}

std::vector<RougeScore> RougeLBatchSerial(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<RougeScore> out;
  out.reserve(pairs.size());
  for (const auto& [c, r] : pairs) out.push_back(RougeL(c, r));
  return out;
}

std::vector<RougeScore> RougeLBatch(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<RougeScore> out(pairs.size());
  const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic, 4) if (n >= 8)
  for (long i = 0; i < n; ++i) out[i] = RougeL(pairs[i].first, pairs[i].second);
  return out;
}

size_t SummaryTokens(std::string_view text) { return Tokenize(text).size(); }

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kSupported: return "supported";
    case Verdict::kUnsupported: return "unsupported";
    case Verdict::kUnparseable: return "unparseable";
  }
  return "";
}

Verdict ParseVerdict(std::string_view response) {
  static const std::regex kAnswer(R"(^[\s*_>#-]*answer[\s*_]*:[\s*_]*(yes|no)\b[\s*_.!]*$)",
                                  std::regex::icase);
  Verdict verdict = Verdict::kUnparseable;
  for (auto line : text::SplitLines(response)) {
    std::string l(line);
    std::smatch m;
    if (std::regex_match(l, m, kAnswer)) {
      verdict = text::ToLower(m[1].str()) == "yes" ? Verdict::kSupported : Verdict::kUnsupported;
    }
  }
  return verdict;
}

std::vector<std::string_view> ChunkByTokens(std::string_view text, size_t chunk_tokens, size_t overlap) {
  if (chunk_tokens == 0 || overlap >= chunk_tokens) {
    throw ArgumentError("chunk size must exceed the overlap");
  }
  auto spans = text::TokenSpans(text);
  if (spans.size() <= chunk_tokens) return {text};
  std::vector<std::string_view> chunks;
  const size_t step = chunk_tokens - overlap;
  for (size_t start = 0; start < spans.size(); start += step) {
    size_t last = std::min(start + chunk_tokens, spans.size()) - 1;
    size_t begin = start == 0 ? 0 : spans[start].begin;
    size_t end = last + 1 == spans.size() ? text.size() : spans[last].end;
    chunks.push_back(text.substr(begin, end - begin));
    if (last + 1 == spans.size()) break;
  }
  return chunks;
}

std::vector<std::string> ExtractFacts(std::string_view summary, llm::LlmClient& judge,
                                      const JudgeConfig& config) {
  if (text::Trim(summary).empty()) return {};
  llm::GenRequest request;
  request.model = config.model;
  request.max_tokens = config.max_tokens;
  request.user_prompt = prompts::Substitute(resources::Get("judge/fact_extraction.txt"),
                                            {{"summary", std::string(summary)}});
  auto response = judge.Generate(request);
  static const std::regex kItem(R"(^\s*\d+[.)]\s+(.*)$)");
  std::vector<std::string> facts;
  for (auto line : text::SplitLines(response.text)) {
    std::string l(line);
    std::smatch m;
    if (std::regex_match(l, m, kItem)) {
      std::string fact(text::Trim(m[1].str()));
      if (!fact.empty()) facts.push_back(std::move(fact));
    }
  }
  return facts;
}

Verdict VerifyFact(std::string_view statement, std::string_view document, llm::LlmClient& judge,
                   const JudgeConfig& config) {
  bool any_unsupported = false;
  for (auto chunk : ChunkByTokens(document, config.chunk_tokens, config.chunk_overlap)) {
    llm::GenRequest request;
    request.model = config.model;
    request.max_tokens = config.max_tokens;
    request.user_prompt = prompts::Substitute(
        resources::Get("judge/fact_verification.txt"),
        {{"document", std::string(chunk)}, {"statement", std::string(statement)}});
    Verdict v = ParseVerdict(judge.Generate(request).text);
    if (v == Verdict::kSupported) return v;
    any_unsupported = any_unsupported || v == Verdict::kUnsupported;
  }
  return any_unsupported ? Verdict::kUnsupported : Verdict::kUnparseable;
}

FactReport FactScore(std::string_view summary, std::string_view document, llm::LlmClient& judge,
                     const JudgeConfig& config) {
  FactReport report;
  std::vector<std::string> facts;
  try {
    facts = ExtractFacts(summary, judge, config);
  } catch (const Error& e) {
    report.error = std::string("fact extraction failed: ") + e.what();
    return report;
  }
  if (facts.empty()) {
    report.error = "no atomic facts extracted";
    return report;
  }
  std::vector<Verdict> verdicts(facts.size(), Verdict::kUnparseable);
  ParallelFor(facts.size(), config.max_parallel,
              [&](size_t i) { verdicts[i] = VerifyFact(facts[i], document, judge, config); });
  size_t supported = 0, unsupported = 0;
  for (size_t i = 0; i < facts.size(); ++i) {
    if (verdicts[i] == Verdict::kSupported) ++supported;
    if (verdicts[i] == Verdict::kUnsupported) ++unsupported;
    report.facts.emplace_back(std::move(facts[i]), verdicts[i]);
  }
  if (supported + unsupported > 0) {
    report.score = static_cast<double>(supported) / static_cast<double>(supported + unsupported);
  } else {
    report.error = "no parseable verdicts";
  }
  return report;
}

std::map<std::string, double> LoadExternalScores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open external score file " + path);
  std::map<std::string, double> scores;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj.contains("score") ||
        !obj["score"].is_number()) {
      throw DatasetError("expected {\"doc_id\": string, \"score\": number}", line_no);
    }
    std::string id = obj["doc_id"].is_string() ? obj["doc_id"].get<std::string>() : obj["doc_id"].dump();
    if (!scores.emplace(id, obj["score"].get<double>()).second) {
      throw DatasetError("duplicate doc_id '" + id + "'", line_no);
    }
  }
  return scores;
}

}  // namespace higen::metrics
