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

#include "higen/pipeline.h"

#include <array>
#include <chrono>
#include <filesystem>

#include "higen/error.h"
#include "higen/text.h"

namespace higen::pipeline {
namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<Method, std::string_view>, 5> kMethodNames = {{
    {Method::kDirect, "direct"},
    {Method::kE2e, "e2e"},
    {Method::kTwoStageGen, "two_stage_gen"},
    {Method::kTwoStageLexrank, "two_stage_lexrank"},
    {Method::kTwoStageCc, "two_stage_cc"},
}};

// Carries the failing stage and prompt hash up to the record boundary.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string prompt_hash, const Error& cause)
      : Error(cause.kind(), cause.what()), stage_(std::move(stage)), hash_(std::move(prompt_hash)) {}
  Failure ToFailure() const { return {stage_, kind(), what(), hash_}; }

 private:
  std::string stage_;
  std::string hash_;
};

json HighlightSetJson(const prompts::HighlightSet& set) {
  json items = json::array();
  for (const auto& h : set.items) {
    items.push_back({{"text", h.text},
                     {"source_index", h.source_index ? json(*h.source_index) : json(nullptr)},
                     {"alignment_score", h.alignment_score}});
  }
  return {{"method", set.method}, {"k_requested", set.k_requested}, {"items", items}};
}

prompts::HighlightSet HighlightSetFromJson(const json& j) {
  prompts::HighlightSet set;
  set.method = j.value("method", "");
  set.k_requested = j.value("k_requested", size_t{0});
  for (const auto& item : j.value("items", json::array())) {
    prompts::Highlight h;
    h.text = item.at("text").get<std::string>();
    if (!item["source_index"].is_null()) h.source_index = item["source_index"].get<size_t>();
    h.alignment_score = item.value("alignment_score", 0.0);
    set.items.push_back(std::move(h));
  }
  return set;
}

void Accumulate(SummaryRecord& record, const llm::GenResponse& r) {
  record.raw_responses.push_back(r.text);
  record.prompt_tokens += r.prompt_tokens;
  record.completion_tokens += r.completion_tokens;
}

std::string_view HighlighterTag(Highlighter h) {
  switch (h) {
    case Highlighter::kGenerative: return "generative";
    case Highlighter::kLexrank: return "lexrank";
    case Highlighter::kContextCite: return "contextcite";
  }
  return "";
}

Method MethodFor(Highlighter h) {
  switch (h) {
    case Highlighter::kGenerative: return Method::kTwoStageGen;
    case Highlighter::kLexrank: return Method::kTwoStageLexrank;
    case Highlighter::kContextCite: return Method::kTwoStageCc;
  }
  return Method::kTwoStageGen;
}

template <typename Fn>
SummaryRecord Timed(SummaryRecord record, Fn&& body) {
  auto start = std::chrono::steady_clock::now();
  try {
    body(record);
  } catch (const StageError& e) {
    record.failure = e.ToFailure();
    record.summary.clear();
  }
  record.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace

std::string_view MethodName(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "";
}

Method ParseMethod(std::string_view name) {
  for (const auto& [method, n] : kMethodNames) {
    if (n == name) return method;
  }
  throw ArgumentError("unknown method: " + std::string(name));
}

const std::vector<Method>& AllMethods() {
  static const std::vector<Method> kAll = {Method::kDirect, Method::kE2e, Method::kTwoStageGen,
                                           Method::kTwoStageLexrank, Method::kTwoStageCc};
  return kAll;
}

std::string_view HighlighterName(Highlighter h) { return HighlighterTag(h); }

Highlighter ParseHighlighter(std::string_view name) {
  if (name == "generative") return Highlighter::kGenerative;
  if (name == "lexrank") return Highlighter::kLexrank;
  if (name == "contextcite") return Highlighter::kContextCite;
  throw ArgumentError("unknown highlighter: " + std::string(name));
}

json ToJson(const SummaryRecord& r) {
  json j = {{"doc_id", r.doc_id},
            {"method", MethodName(r.method)},
            {"model", r.model},
            {"status", r.ok() ? "ok" : "failed"},
            {"highlights", HighlightSetJson(r.highlights)},
            {"summary", r.summary},
            {"raw_responses", r.raw_responses},
            {"fallback_used", r.fallback_used},
            {"prompt_tokens", r.prompt_tokens},
            {"completion_tokens", r.completion_tokens},
            {"summary_completion_tokens", r.summary_completion_tokens},
            {"wall_ms", r.wall_ms}};
  if (r.failure) {
    j["error"] = {{"stage", r.failure->stage},
                  {"kind", r.failure->kind},
                  {"message", r.failure->message},
                  {"prompt_hash", r.failure->prompt_hash}};
  } else {
    j["error"] = nullptr;
  }
  return j;
}

SummaryRecord RecordFromJson(const json& j) {
  SummaryRecord r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.method = ParseMethod(j.at("method").get<std::string>());
  r.model = j.value("model", "");
  r.highlights = HighlightSetFromJson(j.value("highlights", json::object()));
  r.summary = j.value("summary", "");
  r.raw_responses = j.value("raw_responses", std::vector<std::string>{});
  r.fallback_used = j.value("fallback_used", false);
  r.prompt_tokens = j.value("prompt_tokens", int64_t{0});
  r.completion_tokens = j.value("completion_tokens", int64_t{0});
  r.summary_completion_tokens = j.value("summary_completion_tokens", int64_t{0});
  r.wall_ms = j.value("wall_ms", 0.0);
  if (j.contains("error") && j["error"].is_object()) {
    const json& e = j["error"];
    r.failure = Failure{e.value("stage", ""), e.value("kind", ""), e.value("message", ""),
                        e.value("prompt_hash", "")};
  }
  return r;
}

Summarizer::Summarizer(llm::LlmClient& client, std::string model, Params params)
    : client_(client), model_(std::move(model)), params_(std::move(params)) {
  if (params_.k < 1) throw ArgumentError("k must be >= 1");
}

int64_t Summarizer::MaxTokens(const corpus::Document& doc) const {
  if (params_.max_tokens > 0) return params_.max_tokens;
  return prompts::DatasetFor(doc) == prompts::Dataset::kGov ? llm::kGovReportMaxTokens
                                                            : llm::kQmsumMaxTokens;
}

Summarizer::Generated Summarizer::GenerateParsed(prompts::TemplateId id, const std::string& prompt,
                                                 const corpus::Document& doc,
                                                 std::string_view stage, SummaryRecord& record) {
  llm::GenRequest request;
  request.model = model_;
  request.user_prompt = prompt;
  request.temperature = params_.temperature;
  request.max_tokens = MaxTokens(doc);
  request.seed = params_.seed;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt == 1) request.user_prompt = prompt + "\n\n" + prompts::FormatReminder(id);
    if (observer_) observer_(stage, request.user_prompt);
    const std::string hash = text::Sha256Hex(request.user_prompt);
    llm::GenResponse response;
    try {
      response = client_.Generate(request, doc.id);
    } catch (const Error& e) {
      throw StageError(std::string(stage), hash, e);
    }
    Accumulate(record, response);
    try {
      return {prompts::ParsePlanned(response.text), response};
    } catch (const ParseError& e) {
      if (attempt == 1) throw StageError(std::string(stage), hash, e);
    }
  }
  throw Error("internal", "unreachable");
}

std::string AttributionContext(const corpus::Document& doc, const std::string& ablated_text,
                               size_t k) {
  corpus::Document view;
  view.id = doc.id;
  view.kind = doc.kind;
  view.query = doc.query;
  view.normalized_text = ablated_text;
  return prompts::Render(prompts::DirectTemplate(prompts::DatasetFor(doc)), view, k) + "\n\n";
}

SummaryRecord Summarizer::Run(const corpus::Document& doc, Method method) {
  switch (method) {
    case Method::kDirect: return RunDirect(doc);
    case Method::kE2e: return RunE2e(doc);
    case Method::kTwoStageGen: return RunTwoStage(doc, Highlighter::kGenerative);
    case Method::kTwoStageLexrank: return RunTwoStage(doc, Highlighter::kLexrank);
    case Method::kTwoStageCc: return RunTwoStage(doc, Highlighter::kContextCite);
  }
  throw ArgumentError("unknown method");
}

SummaryRecord Summarizer::RunDirect(const corpus::Document& doc) {
  SummaryRecord seed;
  seed.doc_id = doc.id;
  seed.method = Method::kDirect;
  seed.model = model_;
  seed.highlights = {"none", {}, 0};
  return Timed(std::move(seed), [&](SummaryRecord& record) {
    auto id = prompts::DirectTemplate(prompts::DatasetFor(doc));
    std::string prompt;
    try {
      prompt = prompts::Render(id, doc, params_.k);
    } catch (const Error& e) {
      throw StageError("render", "", e);
    }
    auto generated = GenerateParsed(id, prompt, doc, "direct", record);
    record.summary = generated.parsed.summary;
    record.summary_completion_tokens = generated.response.completion_tokens;
  });
}

SummaryRecord Summarizer::RunE2e(const corpus::Document& doc) {
  SummaryRecord seed;
  seed.doc_id = doc.id;
  seed.method = Method::kE2e;
  seed.model = model_;
  seed.highlights = {"generative", {}, params_.k};
  return Timed(std::move(seed), [&](SummaryRecord& record) {
    auto id = prompts::E2eTemplate(prompts::DatasetFor(doc));
    std::string prompt;
    try {
      prompt = prompts::Render(id, doc, params_.k);
    } catch (const Error& e) {
      throw StageError("render", "", e);
    }
    auto generated = GenerateParsed(id, prompt, doc, "e2e", record);
    auto texts = generated.parsed.highlights;
    if (texts.size() > params_.k) texts.resize(params_.k);
    record.highlights.items = prompts::Align(doc, texts, params_.align_threshold);
    record.summary = generated.parsed.summary;
    record.summary_completion_tokens = generated.response.completion_tokens;
  });
}

prompts::HighlightSet Summarizer::StageOneHighlights(const corpus::Document& doc,
                                                     Highlighter highlighter,
                                                     SummaryRecord& record) {
  const auto dataset = prompts::DatasetFor(doc);
  switch (highlighter) {
    case Highlighter::kGenerative: {
      auto id = prompts::Stage1Template(dataset);
      std::string prompt;
      try {
        prompt = prompts::Render(id, doc, params_.k);
      } catch (const Error& e) {
        throw StageError("render", "", e);
      }
      auto generated = GenerateParsed(id, prompt, doc, "stage1", record);
      auto texts = generated.parsed.highlights;
      if (texts.size() > params_.k) texts.resize(params_.k);
      return {"generative", prompts::Align(doc, texts, params_.align_threshold), params_.k};
    }
    case Highlighter::kLexrank: {
      ++lexrank_calls_;
      try {
        return lexrank::Highlights(doc, params_.k, params_.lexrank);
      } catch (const Error& e) {
        throw StageError("lexrank", "", e);
      }
    }
    case Highlighter::kContextCite: {
      // Stage 0: a direct draft is the response whose sources are attributed.
      auto direct_id = prompts::DirectTemplate(dataset);
      std::string prompt;
      try {
        prompt = prompts::Render(direct_id, doc, params_.k);
      } catch (const Error& e) {
        throw StageError("render", "", e);
      }
      auto draft = GenerateParsed(direct_id, prompt, doc, "stage0", record);
      ++attribution_calls_;
      auto build_context = [&](const std::string& ablated) {
        return AttributionContext(doc, ablated, params_.k);
      };
      std::vector<attribution::AblationSample> samples;
      attribution::AttributionResult result;
      try {
        result = attribution::Attribute(doc, draft.response.text, client_, model_,
                                        params_.attribution, build_context, &samples);
      } catch (const Error& e) {
        throw StageError("attribution", text::Sha256Hex(prompt), e);
      }
      if (params_.attribution_dump_dir) {
        std::filesystem::create_directories(*params_.attribution_dump_dir);
        attribution::WriteSamplesJsonl(
            samples, (std::filesystem::path(*params_.attribution_dump_dir) /
                      (doc.id + ".ablations.jsonl")).string());
      }
      return attribution::Highlights(result, doc, params_.k);
    }
  }
  return {};
}

prompts::HighlightSet Summarizer::Highlight(const corpus::Document& doc, Highlighter highlighter) {
  SummaryRecord scratch;
  scratch.doc_id = doc.id;
  return StageOneHighlights(doc, highlighter, scratch);
}

SummaryRecord Summarizer::RunTwoStage(const corpus::Document& doc, Highlighter highlighter) {
  SummaryRecord seed;
  seed.doc_id = doc.id;
  seed.method = MethodFor(highlighter);
  seed.model = model_;
  seed.highlights = {std::string(HighlighterTag(highlighter)), {}, params_.k};
  return Timed(std::move(seed), [&](SummaryRecord& record) {
    record.highlights = StageOneHighlights(doc, highlighter, record);
    if (record.highlights.items.empty()) {
      SummaryRecord direct = RunDirect(doc);
      if (direct.failure) throw StageError("fallback_" + direct.failure->stage,
                                           direct.failure->prompt_hash,
                                           Error(direct.failure->kind, direct.failure->message));
      record.fallback_used = true;
      record.summary = direct.summary;
      for (auto& raw : direct.raw_responses) record.raw_responses.push_back(std::move(raw));
      record.prompt_tokens += direct.prompt_tokens;
      record.completion_tokens += direct.completion_tokens;
      record.summary_completion_tokens = direct.summary_completion_tokens;
      return;
    }
    auto id = prompts::Stage2Template(prompts::DatasetFor(doc));
    std::string prompt;
    try {
      prompt = prompts::Render(id, doc, params_.k, &record.highlights.items);
    } catch (const Error& e) {
      throw StageError("render", "", e);
    }
    auto generated = GenerateParsed(id, prompt, doc, "stage2", record);
    record.summary = generated.parsed.summary;
    record.summary_completion_tokens = generated.response.completion_tokens;
  });
}

}  // namespace higen::pipeline
