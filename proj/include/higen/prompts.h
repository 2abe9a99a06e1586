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

#ifndef HIGEN_PROMPTS_H_
#define HIGEN_PROMPTS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "higen/corpus.h"

namespace higen::prompts {

enum class TemplateId {
  kDirectGov,
  kDirectQmsum,
  kE2eGov,
  kE2eQmsum,
  kStage1HighlightsGov,
  kStage1HighlightsQmsum,
  kStage2SummaryGov,
  kStage2SummaryQmsum,
};

enum class Dataset { kGov, kQmsum };

std::string_view TemplateName(TemplateId id);
TemplateId ParseTemplateId(std::string_view name);

// Template family for a document: transcripts use the meeting prompts.
Dataset DatasetFor(const corpus::Document& doc);
TemplateId DirectTemplate(Dataset d);
TemplateId E2eTemplate(Dataset d);
TemplateId Stage1Template(Dataset d);
TemplateId Stage2Template(Dataset d);

// Whether the template expects a "Key Sentences:" list in the answer.
bool ExpectsHighlights(TemplateId id);

inline constexpr size_t kDefaultK = 30;
inline constexpr double kDefaultAlignThreshold = 0.6;

struct Highlight {
  std::string text;
  std::optional<size_t> source_index;
  double alignment_score = 0.0;
};

// Ordered content plan produced by one highlighter.
struct HighlightSet {
  std::string method;
  std::vector<Highlight> items;
  size_t k_requested = 0;
};

// Body text of a template resource.
const std::string& TemplateBody(TemplateId id);

// Substitutes {name} placeholders (lowercase identifiers only; anything
// else in braces is literal). Throws RenderError naming the first
// placeholder with no value.
std::string Substitute(std::string_view body, const std::map<std::string, std::string>& values);

// Fills {document}, {k}, {query} and {highlights} (as "1. text" lines).
// Stage-2 templates require `highlights`.
std::string Render(TemplateId id, const corpus::Document& document, size_t k,
                   const std::vector<Highlight>* highlights = nullptr);

// Fixed line appended to the prompt when an answer must be regenerated.
const std::string& FormatReminder(TemplateId id);

struct PlannedOutput {
  std::vector<std::string> highlights;
  std::string summary;
  std::string raw;
};

// Parses "Key Sentences:\n1. ...\nSummary: ..." answers. A leading
// <think>...</think> block is dropped. Throws ParseError when the Summary
// marker is missing or the summary is empty.
PlannedOutput ParsePlanned(std::string_view raw);

// Token-level F1 between two texts (lowercased, punctuation stripped,
// multiset overlap).
double TokenF1(std::string_view a, std::string_view b);

// Matches each text to the sentence with the highest token F1 (ties go to
// the smaller index); source_index is set only when F1 >= threshold.
std::vector<Highlight> Align(const corpus::Document& document,
                             const std::vector<std::string>& texts, double threshold);

}  // namespace higen::prompts

#endif  // HIGEN_PROMPTS_H_
