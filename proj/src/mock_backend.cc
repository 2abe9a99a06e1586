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

#include "higen/mock_backend.h"

#include <regex>
#include <unordered_set>

#include "higen/corpus.h"
#include "higen/resources.h"
#include "higen/text.h"

namespace higen::llm {
namespace {

constexpr std::string_view kReportMarker = "Report:\n";
constexpr std::string_view kFence = "==========\n";
constexpr std::string_view kKeyPoints = "You should only focus on the following key points:\n";
constexpr std::string_view kFactMarker = "Summary to decompose:\n";
constexpr std::string_view kDocumentMarker = "Document:\n";
constexpr std::string_view kStatementMarker = "\n\nStatement: ";

std::vector<std::string> SentenceTexts(std::string_view text, bool transcript) {
  std::vector<std::string> out;
  auto kind = transcript ? corpus::DocumentKind::kTranscript : corpus::DocumentKind::kProse;
  for (auto& s : corpus::SegmentSentences(text, kind)) out.push_back(std::move(s.text));
  return out;
}

std::string FirstN(const std::vector<std::string>& sentences, size_t n) {
  std::vector<std::string> head(sentences.begin(),
                                sentences.begin() + std::min(n, sentences.size()));
  return text::Join(head, " ");
}

std::string Numbered(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    out += std::to_string(i + 1) + ". " + text::CollapseWhitespace(items[i]) + "\n";
  }
  return out;
}

std::string VerifyStatement(std::string_view prompt) {
  size_t doc = prompt.find(kDocumentMarker);
  size_t stmt = prompt.rfind(kStatementMarker);
  if (doc == std::string_view::npos || stmt == std::string_view::npos || stmt < doc) {
    return "I cannot tell.";
  }
  std::string_view document = prompt.substr(doc + kDocumentMarker.size(),
                                            stmt - doc - kDocumentMarker.size());
  std::string_view rest = prompt.substr(stmt + kStatementMarker.size());
  std::string_view statement = rest.substr(0, rest.find('\n'));
  auto doc_tokens = text::Tokenize(document);
  std::unordered_set<std::string> vocab(doc_tokens.begin(), doc_tokens.end());
  const auto& stop = resources::Stopwords();
  for (const auto& tok : text::Tokenize(statement)) {
    if (!stop.contains(tok) && !vocab.contains(tok)) return "Answer: no";
  }
  return "Answer: yes";
}

}  // namespace

std::string_view MockExtractDocument(std::string_view prompt, bool* fenced) {
  if (fenced) *fenced = false;
  size_t report = prompt.find(kReportMarker);
  if (report != std::string_view::npos) {
    std::string_view rest = prompt.substr(report + kReportMarker.size());
    size_t end = rest.find("\n" + std::string(kKeyPoints));
    return end == std::string_view::npos ? rest : rest.substr(0, end);
  }
  size_t open = prompt.find(kFence);
  if (open != std::string_view::npos) {
    std::string_view rest = prompt.substr(open + kFence.size());
    size_t close = rest.find("\n==========");
    if (fenced) *fenced = true;
    return close == std::string_view::npos ? rest : rest.substr(0, close);
  }
  return {};
}

GenResponse MockBackend::Generate(const GenRequest& request) {
  const std::string& prompt = request.user_prompt;
  std::string out;
  static const std::regex kExtract(R"(Extract a list of (\d+) key sentences)");
  std::smatch match;
  if (size_t pos = prompt.find(kFactMarker); pos != std::string::npos) {
    out = Numbered(SentenceTexts(prompt.substr(pos + kFactMarker.size()), false));
  } else if (prompt.find(kDocumentMarker) != std::string::npos &&
             prompt.find(kStatementMarker) != std::string::npos) {
    out = VerifyStatement(prompt);
  } else if (size_t kp = prompt.find(kKeyPoints); kp != std::string::npos) {
    std::vector<std::string> points;
    static const std::regex kItem(R"(^\s*\d+[.)]\s+(.*)$)");
    for (auto line : text::SplitLines(std::string_view(prompt).substr(kp + kKeyPoints.size()))) {
      std::string l(line);
      std::smatch m;
      if (std::regex_match(l, m, kItem)) points.push_back(std::string(text::Trim(m[1].str())));
    }
    out = "Summary: " + text::Join(points, " ");
  } else {
    bool fenced = false;
    auto sentences = SentenceTexts(MockExtractDocument(prompt, &fenced), fenced);
    if (std::regex_search(prompt, match, kExtract)) {
      size_t k = std::stoul(match[1].str());
      std::vector<std::string> head(sentences.begin(),
                                    sentences.begin() + std::min(k, sentences.size()));
      out = "Key Sentences:\n" + Numbered(head) + "Summary: " + text::Join(head, " ");
    } else {
      out = "Summary: " + FirstN(sentences, 3);
    }
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  GenResponse response;
  response.text = out;
  response.prompt_tokens = static_cast<int64_t>(text::Tokenize(prompt).size());
  response.completion_tokens = static_cast<int64_t>(text::Tokenize(out).size());
  return response;
}

ScoreResponse MockBackend::Score(const ScoreRequest& request) {
  auto ctx = text::Tokenize(request.context);
  std::unordered_set<std::string> seen(ctx.begin(), ctx.end());
  ScoreResponse r;
  for (auto& tok : text::Tokenize(request.continuation)) {
    r.total_logprob += seen.contains(tok) ? -0.1 : -0.5;
    seen.insert(std::move(tok));
    ++r.token_count;
  }
  if (r.token_count == 0) {
    r.token_count = 1;
    r.total_logprob = -0.5;
  }
  return r;
}

}  // namespace higen::llm
