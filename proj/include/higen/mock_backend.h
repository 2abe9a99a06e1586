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

#ifndef HIGEN_MOCK_BACKEND_H_
#define HIGEN_MOCK_BACKEND_H_

#include <string_view>

#include "higen/llm_client.h"

namespace higen::llm {

// Deterministic stand-in for a model server ("echo_first_k"). It reads the
// prompt layouts produced by the prompts module:
//  - highlight prompts ("Extract a list of K key sentences") answer with the
//    first K document sentences and a summary concatenating them;
//  - stage-2 prompts answer "Summary: " + the listed key points;
//  - direct prompts answer "Summary: " + the first three sentences;
//  - fact-extraction prompts list the summary's sentences;
//  - fact-verification prompts answer yes iff every content word of the
//    statement occurs in the document.
// Scoring charges -0.5 nats per continuation token not seen earlier in the
// context or continuation and -0.1 per token that was.
class MockBackend : public Backend {
 public:
  GenResponse Generate(const GenRequest& request) override;
  ScoreResponse Score(const ScoreRequest& request) override;
};

// The document text embedded in a rendered summarization prompt.
std::string_view MockExtractDocument(std::string_view prompt, bool* fenced = nullptr);

}  // namespace higen::llm

#endif  // HIGEN_MOCK_BACKEND_H_
