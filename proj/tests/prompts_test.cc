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

#include <fstream>
#include <random>

#include "higen/error.h"
#include "higen/prompts.h"
#include "json.hpp"
#include "support.h"

namespace higen::prompts {
namespace {

corpus::Document Gov(const std::string& text) {
  return corpus::MakeDocument("g", text, corpus::DocumentKind::kProse);
}

corpus::Document Meeting() {
  return corpus::MakeDocument("q", "Ann: We ship Friday.\nBob: Agreed.", corpus::DocumentKind::kTranscript,
                              std::string("When do we ship?"));
}

TEST(Render, StageOneCarriesScaffoldAndDocument) {
  auto doc = Gov("Alpha rose. Beta fell.");
  auto p = Render(TemplateId::kStage1HighlightsGov, doc, 30);
  EXPECT_NE(p.find("Key Sentences:"), std::string::npos);
  EXPECT_NE(p.find("Extract a list of 30 key sentences"), std::string::npos);
  EXPECT_NE(p.find("{Sentence Text}"), std::string::npos);
  EXPECT_NE(p.find("Report:\nAlpha rose. Beta fell."), std::string::npos);
  EXPECT_EQ(p.find("{document}"), std::string::npos);
}

TEST(Render, StageTwoNeedsHighlights) {
  auto doc = Gov("Alpha rose. Beta fell.");
  EXPECT_THROW(Render(TemplateId::kStage2SummaryGov, doc, 30), RenderError);
  std::vector<Highlight> h = {{"Alpha rose.", 0, 1.0}, {"Beta\nfell.", 1, 1.0}};
  auto p = Render(TemplateId::kStage2SummaryGov, doc, 30, &h);
  EXPECT_NE(p.find("key points:\n1. Alpha rose.\n2. Beta fell."), std::string::npos);
}

TEST(Render, MeetingTemplatesUseQueryAndFences) {
  auto doc = Meeting();
  auto p = Render(TemplateId::kDirectQmsum, doc, 30);
  EXPECT_NE(p.find("Query: When do we ship?"), std::string::npos);
  EXPECT_NE(p.find("==========\nAnn: We ship Friday.\nBob: Agreed.\n=========="), std::string::npos);
  auto no_query = corpus::MakeDocument("q", "Ann: Hi.", corpus::DocumentKind::kTranscript);
  EXPECT_THROW(Render(TemplateId::kDirectQmsum, no_query, 30), RenderError);
}

TEST(Render, TemplateFamilyFollowsDocumentKind) {
  EXPECT_EQ(DatasetFor(Gov("A.")), Dataset::kGov);
  EXPECT_EQ(DatasetFor(Meeting()), Dataset::kQmsum);
  EXPECT_EQ(E2eTemplate(Dataset::kQmsum), TemplateId::kE2eQmsum);
  EXPECT_TRUE(ExpectsHighlights(TemplateId::kE2eGov));
  EXPECT_FALSE(ExpectsHighlights(TemplateId::kDirectGov));
  for (auto id : {TemplateId::kDirectGov, TemplateId::kE2eQmsum, TemplateId::kStage2SummaryGov}) {
    EXPECT_EQ(ParseTemplateId(TemplateName(id)), id);
  }
}

TEST(Substitute, LiteralBracesAndMissingValues) {
  EXPECT_EQ(Substitute("a {x} {Not This} {y_z}", {{"x", "1"}, {"y_z", "2"}}), "a 1 {Not This} 2");
  try {
    Substitute("{missing}", {});
    FAIL();
  } catch (const RenderError& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
}

TEST(Parse, DefaultExample) {
  auto out = ParsePlanned("Key Sentences:\n1. A rose.\n2. B fell.\nSummary: A rose and B fell.");
  EXPECT_EQ(out.highlights, (std::vector<std::string>{"A rose.", "B fell."}));
  EXPECT_EQ(out.summary, "A rose and B fell.");
}

TEST(Parse, Variants) {
  auto md = ParsePlanned("**Key Sentences:**\n1) One.\n2) Two.\n\n**Summary:** Short.");
  EXPECT_EQ(md.highlights.size(), 2u);
  EXPECT_EQ(md.summary, "Short.");
  auto think = ParsePlanned("<think>Summary: draft</think>\nSummary: Final.");
  EXPECT_EQ(think.summary, "Final.");
  auto multi = ParsePlanned("Summary:\nLine one.\nLine two.");
  EXPECT_EQ(multi.summary, "Line one.\nLine two.");
  EXPECT_THROW(ParsePlanned("Key Sentences:\n1. x"), ParseError);
  EXPECT_THROW(ParsePlanned("Summary:   "), ParseError);
}

std::string RandomPhrase(std::mt19937_64& rng, size_t min_words, size_t max_words) {
  static const std::vector<std::string> words = {
      "budget", "Agency", "rose", "3.5%", "(see", "note)", "officials", "data", "\"quoted\"",
      "and", "report", "fell", "Congress", "2021", "risk", "o'clock", "key", "sentences", "plan"};
  size_t n = min_words + rng() % (max_words - min_words + 1);
  std::string out;
  for (size_t i = 0; i < n; ++i) out += (i ? " " : "") + words[rng() % words.size()];
  return out + ".";
}

TEST(ParseProperty, RandomizedRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = rng() % 35;
    std::vector<std::string> items;
    for (size_t i = 0; i < n; ++i) items.push_back(RandomPhrase(rng, 1, 12));
    std::vector<std::string> summary_lines;
    for (size_t i = 0, lines = 1 + rng() % 3; i < lines; ++i) summary_lines.push_back(RandomPhrase(rng, 3, 20));
    std::string summary;
    for (size_t i = 0; i < summary_lines.size(); ++i) summary += (i ? "\n" : "") + summary_lines[i];

    std::string raw;
    if (rng() % 4 == 0) raw += "<think>\nKey Sentences:\n1. draft\nSummary: draft\n</think>\n";
    if (rng() % 3 == 0) raw += "Here is the answer.\n\n";
    raw += (rng() % 2) ? "Key Sentences:\n" : "**Key Sentences:**\n";
    const bool paren = rng() % 2;
    for (size_t i = 0; i < n; ++i) {
      raw += std::to_string(i + 1) + (paren ? ") " : ". ") + items[i] + "\n";
      if (rng() % 6 == 0) raw += "\n";
    }
    if (rng() % 2) raw += "\n";
    raw += (rng() % 2) ? "Summary: " : "## Summary:\n";
    raw += summary;
    if (rng() % 2) raw += "\n";
    if (rng() % 5 == 0) {
      std::string crlf;
      for (char c : raw) crlf += c == '\n' ? std::string("\r\n") : std::string(1, c);
      raw = crlf;
    }

    auto out = ParsePlanned(raw);
    EXPECT_EQ(out.highlights, items) << raw;
    EXPECT_EQ(out.summary, summary) << raw;
    EXPECT_EQ(out.raw, raw);
  }
}

TEST(Align, ExactCopyAndThreshold) {
  auto doc = Gov("The budget rose sharply. Staff levels fell. Congress asked for a review.");
  auto items = Align(doc, {"Staff levels fell.", "Completely unrelated words here."}, 0.6);
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].source_index, 1u);
  EXPECT_DOUBLE_EQ(items[0].alignment_score, 1.0);
  EXPECT_FALSE(items[1].source_index);
  EXPECT_LT(items[1].alignment_score, 0.6);
  EXPECT_EQ(items[1].text, "Completely unrelated words here.");
}

TEST(Align, TiesGoToSmallerIndex) {
  auto doc = Gov("Same words here. Same words here.");
  auto items = Align(doc, {"Same words here."}, 0.6);
  EXPECT_EQ(items[0].source_index, 0u);
}

TEST(TokenF1, Multiset) {
  EXPECT_DOUBLE_EQ(TokenF1("a a b", "a b"), 2 * (2.0 / 3) * 1.0 / (2.0 / 3 + 1.0));
  EXPECT_DOUBLE_EQ(TokenF1("", "a"), 0.0);
  EXPECT_DOUBLE_EQ(TokenF1("A, b!", "a b"), 1.0);
}

TEST(Align, ParaphraseFixture) {
  std::ifstream in(testing::Fixture("paraphrase_alignment.jsonl"));
  std::string line;
  size_t total = 0, correct = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    std::string raw;
    for (const auto& s : j["sentences"]) raw += s.get<std::string>() + " ";
    auto doc = Gov(raw);
    auto got = Align(doc, {j["paraphrase"].get<std::string>()}, kDefaultAlignThreshold)[0].source_index;
    std::optional<size_t> expected;
    if (!j["expected"].is_null()) expected = j["expected"].get<size_t>();
    ++total;
    if (got == expected) ++correct;
  }
  EXPECT_EQ(total, 20u);
  EXPECT_GE(correct, 18u);
}

}  // namespace
}  // namespace higen::prompts
