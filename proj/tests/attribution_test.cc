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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "higen/attribution.h"
#include "higen/error.h"
#include "oracles.h"
#include "support.h"

namespace higen::attribution {
namespace {

using testing::LinearScorer;
using testing::MarkerDocument;
using testing::ScriptedBackend;

TEST(Masks, AnchorFrequencyAndDeterminism) {
  auto masks = SampleMasks(20, 2000, 0.5, 3);
  ASSERT_EQ(masks.size(), 2000u);
  for (auto b : masks[0].bits) EXPECT_EQ(b, 1);
  double kept = 0;
  for (size_t i = 1; i < masks.size(); ++i) {
    ASSERT_EQ(masks[i].size(), 20u);
    size_t ones = std::count(masks[i].bits.begin(), masks[i].bits.end(), 1);
    EXPECT_GT(ones, 0u);
    kept += ones;
  }
  EXPECT_NEAR(kept / (1999.0 * 20), 0.5, 0.01);
  auto again = SampleMasks(20, 2000, 0.5, 3);
  auto other = SampleMasks(20, 2000, 0.5, 4);
  bool same = true, differs = false;
  for (size_t i = 0; i < masks.size(); ++i) {
    same = same && masks[i].bits == again[i].bits;
    differs = differs || masks[i].bits != other[i].bits;
  }
  EXPECT_TRUE(same);
  EXPECT_TRUE(differs);
  EXPECT_EQ(SampleMasks(3, 2, 0.5, 1)[0].ToString(), "111");
}

TEST(Masks, SingleSentenceNeverAllZero) {
  for (auto& m : SampleMasks(1, 200, 0.2, 9)) EXPECT_EQ(m.bits[0], 1);
}

TEST(Masks, RejectsBadParams) {
  EXPECT_THROW(SampleMasks(0, 4, 0.5, 1), ArgumentError);
  EXPECT_THROW(SampleMasks(3, 1, 0.5, 1), ArgumentError);
  EXPECT_THROW(SampleMasks(3, 4, 1.0, 1), ArgumentError);
}

TEST(Ablate, KeepsOrderWithSingleSpaces) {
  auto doc = corpus::MakeDocument("d", "One.\n\nTwo.  Three.", corpus::DocumentKind::kProse);
  EXPECT_EQ(Ablate(doc, {{1, 0, 1}}), "One. Three.");
  EXPECT_EQ(Ablate(doc, {{1, 1, 1}}), "One. Two. Three.");
  EXPECT_EQ(Ablate(doc, {{0, 0, 0}}), "");
  EXPECT_THROW(Ablate(doc, {{1, 0}}), ArgumentError);
}

TEST(Logit, MatchesExtendedPrecision) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(std::log(1e-12), std::log(50.0));
  for (int i = 0; i < 1000; ++i) {
    double l = -std::exp(u(rng));
    double ref = oracle::LogitExtended(l);
    EXPECT_NEAR(LogitScale(l), ref, 1e-10 * std::max(1.0, std::abs(ref))) << l;
  }
}

TEST(Logit, DomainAndHelpers) {
  EXPECT_THROW(LogitScale(0.0), DomainError);
  EXPECT_THROW(LogitScale(0.5), DomainError);
  EXPECT_THROW(LogitScale(std::nan("")), DomainError);
  EXPECT_NEAR(LogitScale(std::log(0.5)), 0.0, 1e-15);
  EXPECT_NEAR(Log1mExp(-1e-20), std::log(1e-20), 1e-9);
  EXPECT_NEAR(Log1mExp(-50.0), -std::exp(-50.0), 1e-30);
}

TEST(Attribute, RecoversLinearScorer) {
  const std::vector<double> base = {2.0, 1.5, 1.0, 0.6, 0.3, 0.1, 0.0, 0.0, -0.2, -0.5, 0.05, 0.2};
  for (uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<double> w = base;
    std::mt19937_64 rng(seed);
    std::shuffle(w.begin(), w.end(), rng);
    auto backend = std::make_shared<LinearScorer>(w, -1.0, 0.01, seed);
    llm::LlmClient client(backend);
    auto doc = MarkerDocument(12);
    Params p;
    p.num_ablations = 96;
    p.seed = seed;
    std::vector<AblationSample> samples;
    auto r = Attribute(doc, "the response", client, "m", p, {}, &samples);
    ASSERT_EQ(r.scores.size(), 12u);
    EXPECT_EQ(samples.size(), 96u);
    EXPECT_EQ(r.num_ablations, 96u);
    EXPECT_GT(oracle::Pearson(r.scores, w), 0.99);
    EXPECT_GT(r.r_squared, 0.99);

    std::vector<size_t> truth(12), got(12);
    std::iota(truth.begin(), truth.end(), size_t{0});
    std::iota(got.begin(), got.end(), size_t{0});
    std::sort(truth.begin(), truth.end(), [&](size_t a, size_t b) { return w[a] > w[b]; });
    std::sort(got.begin(), got.end(), [&](size_t a, size_t b) { return r.scores[a] > r.scores[b]; });
    std::vector<size_t> t3(truth.begin(), truth.begin() + 3), g3(got.begin(), got.begin() + 3);
    EXPECT_EQ(g3, t3) << "seed " << seed;
  }
}

TEST(Attribute, UsesContextBuilderAndDropsNothingFinite) {
  auto backend = std::make_shared<ScriptedBackend>();
  std::vector<std::string> contexts;
  std::mutex mu;
  backend->on_score = [&](const llm::ScoreRequest& r) {
    std::lock_guard lock(mu);
    contexts.push_back(r.context);
    return llm::ScoreResponse{-1.0 - 0.01 * r.context.size(), 3};
  };
  llm::LlmClient client(backend);
  auto doc = MarkerDocument(4);
  Params p;
  p.num_ablations = 16;
  Attribute(doc, "resp", client, "m", p, [](const std::string& t) { return "CTX[" + t + "]"; });
  EXPECT_EQ(backend->score_calls.load(), contexts.size());
  for (const auto& c : contexts) EXPECT_EQ(c.rfind("CTX[", 0), 0u);
}

TEST(Attribute, AllScoresOutsideDomainIsAnError) {
  auto backend = std::make_shared<ScriptedBackend>();
  backend->on_score = [](const llm::ScoreRequest&) { return llm::ScoreResponse{0.0, 1}; };
  llm::LlmClient client(backend);
  EXPECT_THROW(Attribute(MarkerDocument(3), "r", client, "m", Params{}), DomainError);
  EXPECT_THROW(Attribute(MarkerDocument(3), "", client, "m", Params{}), ArgumentError);
}

TEST(Highlights, PositiveOnlyInDocumentOrder) {
  auto doc = MarkerDocument(5);
  AttributionResult r;
  r.scores = {0.5, -1.0, 0.0, 0.7, 0.7};
  auto h2 = Highlights(r, doc, 2);
  EXPECT_EQ(h2.method, "contextcite");
  ASSERT_EQ(h2.items.size(), 2u);
  EXPECT_EQ(*h2.items[0].source_index, 3u);
  EXPECT_EQ(*h2.items[1].source_index, 4u);
  auto all = Highlights(r, doc, 30);
  ASSERT_EQ(all.items.size(), 3u);
  EXPECT_EQ(*all.items[0].source_index, 0u);
  EXPECT_EQ(all.items[0].text, doc.sentences[0].text);
  r.scores.assign(5, -0.1);
  EXPECT_TRUE(Highlights(r, doc, 3).items.empty());
  r.scores.resize(4);
  EXPECT_THROW(Highlights(r, doc, 3), ArgumentError);
}

TEST(Samples, JsonlDump) {
  testing::TempDir dir("att");
  auto path = (dir.path() / "s.jsonl").string();
  WriteSamplesJsonl({{{{1, 0}}, -0.5}, {{{0, 1}}, 1.25}}, path);
  EXPECT_EQ(testing::ReadAll(path), "{\"logit\":-0.5,\"mask\":\"10\"}\n{\"logit\":1.25,\"mask\":\"01\"}\n");
}

}  // namespace
}  // namespace higen::attribution
