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

#include <gtest/gtest.h>

#include "higen/error.h"
#include "higen/mock_backend.h"
#include "higen/pipeline.h"
#include "support.h"

namespace higen::pipeline {
namespace {

using testing::ScriptedBackend;

corpus::Document GovDoc() {
  return corpus::MakeDocument(
      "g1",
      "The agency spent four million dollars on the program. Staff turnover doubled in two years. "
      "Auditors found gaps in data reliability. Officials agreed to fix reporting systems. "
      "Congress requested a follow-up review.",
      corpus::DocumentKind::kProse);
}

Params SmallParams() {
  Params p;
  p.k = 2;
  p.attribution.num_ablations = 16;
  return p;
}

TEST(Methods, NamesRoundTrip) {
  ASSERT_EQ(AllMethods().size(), 5u);
  for (auto m : AllMethods()) EXPECT_EQ(ParseMethod(MethodName(m)), m);
  EXPECT_THROW(ParseMethod("bogus"), ArgumentError);
  EXPECT_EQ(ParseHighlighter("contextcite"), Highlighter::kContextCite);
}

TEST(MockPipeline, DirectUsesFirstThreeSentences) {
  llm::LlmClient client(std::make_shared<llm::MockBackend>());
  Summarizer s(client, "mock", SmallParams());
  auto doc = GovDoc();
  auto r = s.Run(doc, Method::kDirect);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.summary, doc.sentences[0].text + " " + doc.sentences[1].text + " " + doc.sentences[2].text);
  EXPECT_EQ(r.highlights.method, "none");
  EXPECT_TRUE(r.highlights.items.empty());
  EXPECT_EQ(r.raw_responses.size(), 1u);
  EXPECT_GT(r.summary_completion_tokens, 0);
}

TEST(MockPipeline, E2eAlignsFirstKSentences) {
  llm::LlmClient client(std::make_shared<llm::MockBackend>());
  Summarizer s(client, "mock", SmallParams());
  auto r = s.Run(GovDoc(), Method::kE2e);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.highlights.items.size(), 2u);
  EXPECT_EQ(*r.highlights.items[0].source_index, 0u);
  EXPECT_EQ(*r.highlights.items[1].source_index, 1u);
  EXPECT_EQ(r.highlights.method, "generative");
}

TEST(MockPipeline, AllTwoStageMethodsSucceed) {
  llm::LlmClient client(std::make_shared<llm::MockBackend>());
  Summarizer s(client, "mock", SmallParams());
  auto doc = GovDoc();
  auto gen = s.Run(doc, Method::kTwoStageGen);
  ASSERT_TRUE(gen.ok());
  EXPECT_EQ(gen.summary, doc.sentences[0].text + " " + doc.sentences[1].text);
  EXPECT_EQ(gen.raw_responses.size(), 2u);
  auto lex = s.Run(doc, Method::kTwoStageLexrank);
  ASSERT_TRUE(lex.ok());
  EXPECT_EQ(lex.highlights.method, "lexrank");
  EXPECT_EQ(lex.highlights.items.size(), 2u);
  EXPECT_EQ(lex.raw_responses.size(), 1u);
  auto cc = s.Run(doc, Method::kTwoStageCc);
  ASSERT_TRUE(cc.ok()) << cc.failure->message;
  EXPECT_EQ(cc.highlights.method, "contextcite");
  EXPECT_LE(cc.highlights.items.size(), 2u);
  EXPECT_EQ(s.lexrank_invocations(), 1u);
  EXPECT_EQ(s.attribution_invocations(), 1u);
}

TEST(Pipeline, MissingSummaryRetriesOnceThenFails) {
  auto backend = std::make_shared<ScriptedBackend>();
  backend->on_generate = [](const llm::GenRequest&) { return llm::GenResponse{"I refuse.", 3, 2}; };
  llm::LlmClient client(backend);
  Summarizer s(client, "m", SmallParams());
  auto r = s.Run(GovDoc(), Method::kDirect);
  EXPECT_EQ(backend->generate_calls.load(), 2u);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failure->stage, "direct");
  EXPECT_EQ(r.failure->kind, "parse");
  EXPECT_EQ(r.failure->prompt_hash.size(), 64u);
  EXPECT_EQ(r.raw_responses.size(), 2u);
  auto prompts = backend->prompts();
  EXPECT_EQ(prompts[1].rfind(prompts[0], 0), 0u);
  EXPECT_GT(prompts[1].size(), prompts[0].size());
}

TEST(Pipeline, RetryWithReminderCanRecover) {
  auto backend = std::make_shared<ScriptedBackend>();
  backend->on_generate = [&](const llm::GenRequest&) {
    return llm::GenResponse{backend->generate_calls.load() == 1 ? "Nope." : "Summary: Fine.", 1, 1};
  };
  llm::LlmClient client(backend);
  Summarizer s(client, "m", SmallParams());
  auto r = s.Run(GovDoc(), Method::kDirect);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.summary, "Fine.");
}

TEST(Pipeline, ObserverSeesStagesAndBudgets) {
  auto backend = std::make_shared<ScriptedBackend>();
  std::vector<int64_t> budgets;
  backend->on_generate = [&](const llm::GenRequest& r) {
    budgets.push_back(r.max_tokens);
    return llm::GenResponse{"Key Sentences:\n1. Staff turnover doubled in two years.\nSummary: S.", 1, 1};
  };
  llm::LlmClient client(backend);
  Summarizer s(client, "m", SmallParams());
  std::vector<std::string> stages;
  s.set_prompt_observer([&](std::string_view stage, const std::string&) { stages.emplace_back(stage); });
  auto r = s.Run(GovDoc(), Method::kTwoStageGen);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(stages, (std::vector<std::string>{"stage1", "stage2"}));
  EXPECT_EQ(budgets, (std::vector<int64_t>{1200, 1200}));
  EXPECT_EQ(*r.highlights.items[0].source_index, 1u);
  EXPECT_NE(backend->prompts()[1].find("1. Staff turnover doubled in two years."), std::string::npos);

  auto meeting = corpus::MakeDocument("q", "Ann: We ship Friday.\nBob: Agreed.", corpus::DocumentKind::kTranscript,
                                      std::string("When do we ship?"));
  budgets.clear();
  s.Run(meeting, Method::kDirect);
  EXPECT_EQ(budgets, (std::vector<int64_t>{256}));
}

TEST(Pipeline, EmptyHighlightsFallBackToDirect) {
  auto backend = std::make_shared<ScriptedBackend>();
  backend->on_generate = [](const llm::GenRequest& r) {
    if (r.user_prompt.find("key sentences") != std::string::npos ||
        r.user_prompt.find("Key Sentences") != std::string::npos) {
      return llm::GenResponse{"Key Sentences:\nSummary: draft.", 1, 1};
    }
    return llm::GenResponse{"Summary: Direct answer.", 1, 1};
  };
  llm::LlmClient client(backend);
  Summarizer s(client, "m", SmallParams());
  auto r = s.Run(GovDoc(), Method::kTwoStageGen);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.fallback_used);
  EXPECT_EQ(r.summary, "Direct answer.");
  EXPECT_EQ(r.method, Method::kTwoStageGen);
  EXPECT_EQ(backend->generate_calls.load(), 2u);
}

TEST(Pipeline, TransportFailureBecomesRecord) {
  auto backend = std::make_shared<ScriptedBackend>();
  backend->on_generate = [](const llm::GenRequest&) -> llm::GenResponse { throw EndpointError(400, "boom"); };
  llm::LlmClient client(backend);
  Summarizer s(client, "m", SmallParams());
  auto r = s.Run(GovDoc(), Method::kE2e);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failure->stage, "e2e");
  EXPECT_EQ(r.failure->kind, "endpoint");
}

TEST(Pipeline, ContextCiteScoresDirectDraft) {
  auto backend = std::make_shared<ScriptedBackend>();
  std::vector<std::string> contexts;
  std::mutex mu;
  backend->on_generate = [](const llm::GenRequest&) { return llm::GenResponse{"Summary: Staff left.", 1, 1}; };
  backend->on_score = [&](const llm::ScoreRequest& r) {
    std::lock_guard lock(mu);
    contexts.push_back(r.context);
    EXPECT_EQ(r.continuation, "Summary: Staff left.");
    bool staff = r.context.find("Staff turnover") != std::string::npos;
    return llm::ScoreResponse{staff ? -0.5 : -3.0, 3};
  };
  llm::LlmClient client(backend);
  Summarizer s(client, "m", SmallParams());
  auto doc = GovDoc();
  auto r = s.Run(doc, Method::kTwoStageCc);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.highlights.items.size(), 1u);
  EXPECT_EQ(*r.highlights.items[0].source_index, 1u);
  EXPECT_EQ(backend->generate_calls.load(), 2u);  // stage 0 draft and stage 2
  for (const auto& c : contexts) EXPECT_EQ(c.substr(c.size() - 2), "\n\n");
  EXPECT_EQ(AttributionContext(doc, "X.", 2).find("Report:\nX."), AttributionContext(doc, "X.", 2).find("Report:"));
}

TEST(Records, JsonRoundTrip) {
  llm::LlmClient client(std::make_shared<llm::MockBackend>());
  Summarizer s(client, "mock", SmallParams());
  auto r = s.Run(GovDoc(), Method::kE2e);
  auto back = RecordFromJson(ToJson(r));
  EXPECT_EQ(ToJson(back), ToJson(r));
  SummaryRecord failed;
  failed.doc_id = "x";
  failed.failure = Failure{"stage1", "parse", "bad", "abc"};
  auto fb = RecordFromJson(ToJson(failed));
  ASSERT_FALSE(fb.ok());
  EXPECT_EQ(fb.failure->stage, "stage1");
}

}  // namespace
}  // namespace higen::pipeline
