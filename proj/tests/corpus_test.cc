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

#include "higen/corpus.h"
#include "higen/error.h"
#include "json.hpp"
#include "support.h"

namespace higen::corpus {
namespace {

using testing::Fixture;
using testing::TempDir;

std::vector<std::string> Texts(const std::vector<Sentence>& s) {
  std::vector<std::string> out;
  for (const auto& x : s) out.push_back(x.text);
  return out;
}

std::string NonSpace(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

TEST(Normalize, CanonicalizesNewlinesAndControls) {
  EXPECT_EQ(NormalizeText("a\r\nb"), "a\nb");
  EXPECT_EQ(NormalizeText("a\rb"), "a\nb");
  EXPECT_EQ(NormalizeText(""), "");
  EXPECT_EQ(NormalizeText(std::string("x\0y", 3)), "xy");
  EXPECT_EQ(NormalizeText("t\tab"), "t\tab");
}

TEST(Segment, BasicExamples) {
  EXPECT_TRUE(SegmentSentences("", DocumentKind::kProse).empty());
  auto one = SegmentSentences("Hello world.", DocumentKind::kProse);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].index, 0u);
  EXPECT_EQ(one[0].text, "Hello world.");
  EXPECT_EQ(SegmentSentences("no punctuation at all", DocumentKind::kProse).size(), 1u);
}

TEST(Segment, HandLabeledFixture) {
  std::ifstream in(Fixture("segmentation.jsonl"));
  std::string line;
  size_t cases = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    auto expected = j["sentences"].get<std::vector<std::string>>();
    auto got = Texts(SegmentSentences(NormalizeText(j["text"].get<std::string>()), DocumentKind::kProse));
    EXPECT_EQ(got, expected) << j["text"];
    ++cases;
  }
  EXPECT_EQ(cases, 40u);
}

TEST(Segment, SpansIndexNormalizedText) {
  std::string t = "First one. Second one!  Third?\nFourth.";
  auto s = SegmentSentences(t, DocumentKind::kProse);
  ASSERT_EQ(s.size(), 4u);
  for (size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].index, i);
    EXPECT_EQ(t.substr(s[i].span.begin, s[i].span.end - s[i].span.begin), s[i].text);
    if (i) EXPECT_LE(s[i - 1].span.end, s[i].span.begin);
  }
}

std::string RandomProse(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {
      "The", "agency", "Dr.", "U.S.", "report", "found", "costs", "rose", "5.2", "percent",
      "etc.", "Mr.", "data", "and", "\"quoted\"", "(note)", "Program", "2019", "staff", "review"};
  static const std::vector<std::string> ends = {".", "!", "?", "...", ".\"", ".)"};
  std::string out;
  size_t sentences = 1 + rng() % 8;
  for (size_t s = 0; s < sentences; ++s) {
    size_t len = 1 + rng() % 10;
    for (size_t w = 0; w < len; ++w) {
      out += words[rng() % words.size()];
      out += w + 1 < len ? " " : "";
    }
    out += ends[rng() % ends.size()];
    out += (rng() % 5 == 0) ? "\n\n" : " ";
  }
  return out;
}

TEST(SegmentProperty, ConcatenationPreservesNonWhitespace) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::string t = NormalizeText(RandomProse(rng));
    std::string joined;
    for (const auto& s : SegmentSentences(t, DocumentKind::kProse)) joined += s.text;
    EXPECT_EQ(NonSpace(joined), NonSpace(t)) << t;
  }
}

TEST(SegmentProperty, IdempotentUnderRejoin) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::string t = NormalizeText(RandomProse(rng));
    auto first = SegmentSentences(t, DocumentKind::kProse);
    std::string rejoined;
    for (size_t i = 0; i < first.size(); ++i) rejoined += (i ? " " : "") + first[i].text;
    EXPECT_EQ(SegmentSentences(rejoined, DocumentKind::kProse).size(), first.size()) << t;
  }
}

TEST(Segment, TranscriptTurnsCarrySpeakers) {
  std::string t = "Alice: Hi there. How are you?\nBob: Fine.\nContinued line here.\nDr. Lee: Good.";
  auto s = SegmentSentences(t, DocumentKind::kTranscript);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(*s[0].speaker, "Alice");
  EXPECT_EQ(s[0].text, "Hi there.");
  EXPECT_EQ(*s[1].speaker, "Alice");
  EXPECT_EQ(*s[2].speaker, "Bob");
  EXPECT_EQ(*s[3].speaker, "Bob");
  EXPECT_EQ(s[3].text, "Continued line here.");
  EXPECT_EQ(*s[4].speaker, "Dr. Lee");
  for (const auto& x : s) EXPECT_EQ(t.substr(x.span.begin, x.span.end - x.span.begin), x.text);
}

TEST(Segment, TranscriptTextBeforeFirstSpeaker) {
  auto s = SegmentSentences("Opening remarks.\nAnn: Yes.", DocumentKind::kTranscript);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(*s[0].speaker, "Unknown");
  EXPECT_EQ(*s[1].speaker, "Ann");
}

TEST(Document, DegenerateFlag) {
  EXPECT_TRUE(MakeDocument("a", "One.", DocumentKind::kProse).degenerate());
  EXPECT_FALSE(MakeDocument("a", "One. Two.", DocumentKind::kProse).degenerate());
  EXPECT_TRUE(MakeDocument("a", "", DocumentKind::kProse).degenerate());
}

TEST(QueryPrefix, FenceAndParagraphForms) {
  auto [q1, t1] = SplitQueryPrefix("What was decided?\n==========\nA: Yes.\nB: No.\n==========");
  ASSERT_TRUE(q1);
  EXPECT_EQ(*q1, "What was decided?");
  EXPECT_EQ(t1, "A: Yes.\nB: No.");
  auto [q2, t2] = SplitQueryPrefix("Summarize the budget talk.\n\nA: Yes.");
  ASSERT_TRUE(q2);
  EXPECT_EQ(*q2, "Summarize the budget talk.");
  EXPECT_EQ(t2, "A: Yes.");
  auto [q3, t3] = SplitQueryPrefix("A: Yes.\nB: No.");
  EXPECT_FALSE(q3);
  EXPECT_EQ(t3, "A: Yes.\nB: No.");
}

void WriteLines(const std::filesystem::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p);
  for (const auto& l : lines) out << l << "\n";
}

TEST(LoadDataset, MinimalRecord) {
  TempDir dir("ds");
  auto p = dir.path() / "d.jsonl";
  WriteLines(p, {R"({"id":"d1","input":"A. B.","output":"A."})"});
  auto docs = LoadDataset(p.string(), DatasetSchema::kScrollsGovReport);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].size(), 2u);
  EXPECT_EQ(*docs[0].reference_summary, "A.");
  EXPECT_EQ(docs[0].kind, DocumentKind::kProse);
  EXPECT_TRUE(LoadDataset(p.string(), DatasetSchema::kScrollsGovReport, 0).empty());
}

TEST(LoadDataset, LimitIsPrefix) {
  auto all = LoadDataset(Fixture("govreport10.jsonl"), DatasetSchema::kScrollsGovReport);
  ASSERT_EQ(all.size(), 10u);
  for (size_t k : {1u, 3u, 10u, 20u}) {
    auto some = LoadDataset(Fixture("govreport10.jsonl"), DatasetSchema::kScrollsGovReport, k);
    ASSERT_EQ(some.size(), std::min<size_t>(k, 10));
    for (size_t i = 0; i < some.size(); ++i) EXPECT_EQ(some[i].id, all[i].id);
  }
}

TEST(LoadDataset, Errors) {
  TempDir dir("ds");
  auto p = dir.path() / "bad.jsonl";
  WriteLines(p, {R"({"id":"d1","input":"A."})", "{not json"});
  try {
    LoadDataset(p.string(), DatasetSchema::kScrollsGovReport);
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line().value_or(0), 2u);
  }
  WriteLines(p, {R"({"id":"d1"})"});
  try {
    LoadDataset(p.string(), DatasetSchema::kScrollsGovReport);
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find("input"), std::string::npos);
  }
  WriteLines(p, {R"({"id":"d1","input":"A."})", R"({"id":"d1","input":"B."})"});
  EXPECT_THROW(LoadDataset(p.string(), DatasetSchema::kScrollsGovReport), DatasetError);
}

TEST(LoadDataset, QmsumSplitsQueryAndSpeakers) {
  auto docs = LoadDataset(Fixture("qmsum3.jsonl"), DatasetSchema::kScrollsQmsum);
  ASSERT_EQ(docs.size(), 3u);
  for (const auto& d : docs) {
    EXPECT_EQ(d.kind, DocumentKind::kTranscript);
    ASSERT_TRUE(d.query);
    EXPECT_FALSE(d.query->empty());
    for (const auto& s : d.sentences) EXPECT_TRUE(s.speaker) << s.text;
  }
  EXPECT_EQ(*docs[0].query, "What did the group decide about the remote control features?");
  EXPECT_EQ(*docs[0].sentences[0].speaker, "Project Manager");
  EXPECT_EQ(docs[0].normalized_text.find("=========="), std::string::npos);
}

TEST(LoadDataset, GenericFieldMap) {
  TempDir dir("ds");
  auto p = dir.path() / "g.jsonl";
  WriteLines(p, {R"({"key":"x","body":"One. Two.","gold":"One.","ask":"Why?"})"});
  FieldMap fm;
  fm.id_field = "key";
  fm.input_field = "body";
  fm.output_field = "gold";
  fm.query_field = "ask";
  auto docs = LoadDataset(p.string(), DatasetSchema::kGenericJsonl, std::nullopt, fm);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].id, "x");
  EXPECT_EQ(*docs[0].query, "Why?");
  EXPECT_EQ(*docs[0].reference_summary, "One.");
}

TEST(LoadDataset, MissingReferenceIsAllowed) {
  TempDir dir("ds");
  auto p = dir.path() / "n.jsonl";
  WriteLines(p, {R"({"id":"d1","input":"A. B."})"});
  auto docs = LoadDataset(p.string(), DatasetSchema::kScrollsGovReport);
  EXPECT_FALSE(docs[0].reference_summary);
}

}  // namespace
}  // namespace higen::corpus
