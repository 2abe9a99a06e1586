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

#ifndef HIGEN_PIPELINE_H_
#define HIGEN_PIPELINE_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "higen/attribution.h"
#include "higen/corpus.h"
#include "higen/lexrank.h"
#include "higen/llm_client.h"
#include "higen/prompts.h"
#include "json.hpp"

namespace higen::pipeline {

enum class Method { kDirect, kE2e, kTwoStageGen, kTwoStageLexrank, kTwoStageCc };

std::string_view MethodName(Method m);
Method ParseMethod(std::string_view name);
const std::vector<Method>& AllMethods();

enum class Highlighter { kGenerative, kLexrank, kContextCite };
std::string_view HighlighterName(Highlighter h);
Highlighter ParseHighlighter(std::string_view name);

struct Failure {
  std::string stage;
  std::string kind;
  std::string message;
  // SHA-256 of the prompt being processed; the full prompt is recoverable
  // from the client cache.
  std::string prompt_hash;
};

struct SummaryRecord {
  std::string doc_id;
  Method method = Method::kDirect;
  std::string model;
  prompts::HighlightSet highlights;
  std::string summary;
  std::vector<std::string> raw_responses;
  bool fallback_used = false;
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
  // Completion tokens of the call that produced the summary.
  int64_t summary_completion_tokens = 0;
  double wall_ms = 0.0;
  std::optional<Failure> failure;

  bool ok() const { return !failure.has_value(); }
};

nlohmann::json ToJson(const SummaryRecord& r);
SummaryRecord RecordFromJson(const nlohmann::json& j);

struct Params {
  size_t k = prompts::kDefaultK;
  double align_threshold = prompts::kDefaultAlignThreshold;
  // 0 picks the dataset default (1200 GovReport-style, 256 QMSum-style).
  int64_t max_tokens = 0;
  double temperature = 0.0;
  std::optional<int64_t> seed;
  lexrank::Params lexrank;
  attribution::Params attribution;
  // When set, (mask, logit) pairs are written to <dir>/<doc_id>.ablations.jsonl.
  std::optional<std::string> attribution_dump_dir;
};

// Scoring context for an ablated document: the direct prompt rendered over
// the kept sentences, followed by a blank line.
std::string AttributionContext(const corpus::Document& doc, const std::string& ablated_text,
                               size_t k);

// Runs summarization strategies for one model. Thread-safe: distinct
// documents may be processed concurrently.
class Summarizer {
 public:
  using PromptObserver = std::function<void(std::string_view stage, const std::string& prompt)>;

  Summarizer(llm::LlmClient& client, std::string model, Params params);

  SummaryRecord Run(const corpus::Document& doc, Method method);
  SummaryRecord RunDirect(const corpus::Document& doc);
  SummaryRecord RunE2e(const corpus::Document& doc);
  SummaryRecord RunTwoStage(const corpus::Document& doc, Highlighter highlighter);
  // Stage 1 only. Throws the stage's Error on failure.
  prompts::HighlightSet Highlight(const corpus::Document& doc, Highlighter highlighter);

  // Called with every prompt before it is sent.
  void set_prompt_observer(PromptObserver observer) { observer_ = std::move(observer); }

  size_t lexrank_invocations() const { return lexrank_calls_.load(); }
  size_t attribution_invocations() const { return attribution_calls_.load(); }

  const Params& params() const { return params_; }

 private:
  struct Generated {
    prompts::PlannedOutput parsed;
    llm::GenResponse response;
  };

  // One generate call plus at most one retry with the format reminder.
  Generated GenerateParsed(prompts::TemplateId id, const std::string& prompt,
                           const corpus::Document& doc, std::string_view stage,
                           SummaryRecord& record);
  int64_t MaxTokens(const corpus::Document& doc) const;
  prompts::HighlightSet StageOneHighlights(const corpus::Document& doc, Highlighter highlighter,
                                           SummaryRecord& record);

  llm::LlmClient& client_;
  std::string model_;
  Params params_;
  PromptObserver observer_;
  std::atomic<size_t> lexrank_calls_{0};
  std::atomic<size_t> attribution_calls_{0};
};

}  // namespace higen::pipeline

#endif  // HIGEN_PIPELINE_H_
