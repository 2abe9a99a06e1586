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

#include "higen/prompts.h"

#include <array>
#include <regex>
#include <unordered_map>

#include "higen/error.h"
#include "higen/resources.h"
#include "higen/text.h"

namespace higen::prompts {
namespace {

struct TemplateInfo {
  TemplateId id;
  std::string_view name;
};

constexpr std::array<TemplateInfo, 8> kTemplates = {{
    {TemplateId::kDirectGov, "direct_gov"},
    {TemplateId::kDirectQmsum, "direct_qmsum"},
    {TemplateId::kE2eGov, "e2e_gov"},
    {TemplateId::kE2eQmsum, "e2e_qmsum"},
    {TemplateId::kStage1HighlightsGov, "stage1_highlights_gov"},
    {TemplateId::kStage1HighlightsQmsum, "stage1_highlights_qmsum"},
    {TemplateId::kStage2SummaryGov, "stage2_summary_gov"},
    {TemplateId::kStage2SummaryQmsum, "stage2_summary_qmsum"},
}};

const std::regex& SummaryMarker() {
  static const std::regex re(R"(^[\s#*_>\-]*summary[\s*_]*:[*_]*\s*(.*)$)", std::regex::icase);
  return re;
}

const std::regex& KeySentencesMarker() {
  static const std::regex re(R"(^[\s#*_>\-]*key\s+sentences[\s*_]*:[*_]*\s*(.*)$)",
                             std::regex::icase);
  return re;
}

const std::regex& ListItem() {
  static const std::regex re(R"(^\s*\d+[.)]\s+(.*)$)");
  return re;
}

std::string_view StripThinking(std::string_view raw) {
  size_t close = raw.find("</think>");
  if (close == std::string_view::npos) return raw;
  std::string_view head = text::Trim(raw.substr(0, close));
  // Only a leading reasoning block is dropped; either tag form is accepted
  // since some servers strip the opening tag.
  if (head.empty() || text::StartsWith(head, "<think>") || raw.find("<think>") == std::string_view::npos) {
    return raw.substr(close + std::string_view("</think>").size());
  }
  return raw;
}

std::unordered_map<std::string, int> Counts(std::string_view s) {
  std::unordered_map<std::string, int> counts;
  for (auto& tok : text::Tokenize(s)) ++counts[tok];
  return counts;
}

double F1FromCounts(const std::unordered_map<std::string, int>& a, size_t a_total,
                    const std::unordered_map<std::string, int>& b, size_t b_total) {
  if (a_total == 0 || b_total == 0) return 0.0;
  size_t overlap = 0;
  for (const auto& [tok, n] : a) {
    auto it = b.find(tok);
    if (it != b.end()) overlap += static_cast<size_t>(std::min(n, it->second));
  }
  if (overlap == 0) return 0.0;
  double p = static_cast<double>(overlap) / static_cast<double>(a_total);
  double r = static_cast<double>(overlap) / static_cast<double>(b_total);
  return 2.0 * p * r / (p + r);
}

size_t Total(const std::unordered_map<std::string, int>& c) {
  size_t n = 0;
  for (const auto& kv : c) n += static_cast<size_t>(kv.second);
  return n;
}

}  // namespace

std::string_view TemplateName(TemplateId id) {
  for (const auto& t : kTemplates) {
    if (t.id == id) return t.name;
  }
  return "";
}

TemplateId ParseTemplateId(std::string_view name) {
  for (const auto& t : kTemplates) {
    if (t.name == name) return t.id;
  }
  throw ArgumentError("unknown template id: " + std::string(name));
}

Dataset DatasetFor(const corpus::Document& doc) {
  return doc.kind == corpus::DocumentKind::kTranscript ? Dataset::kQmsum : Dataset::kGov;
}

TemplateId DirectTemplate(Dataset d) {
  return d == Dataset::kGov ? TemplateId::kDirectGov : TemplateId::kDirectQmsum;
}
TemplateId E2eTemplate(Dataset d) {
  return d == Dataset::kGov ? TemplateId::kE2eGov : TemplateId::kE2eQmsum;
}
TemplateId Stage1Template(Dataset d) {
  return d == Dataset::kGov ? TemplateId::kStage1HighlightsGov : TemplateId::kStage1HighlightsQmsum;
}
TemplateId Stage2Template(Dataset d) {
  return d == Dataset::kGov ? TemplateId::kStage2SummaryGov : TemplateId::kStage2SummaryQmsum;
}

bool ExpectsHighlights(TemplateId id) {
  switch (id) {
    case TemplateId::kE2eGov:
    case TemplateId::kE2eQmsum:
    case TemplateId::kStage1HighlightsGov:
    case TemplateId::kStage1HighlightsQmsum:
      return true;
    default:
      return false;
  }
}

const std::string& TemplateBody(TemplateId id) {
  return resources::Get("templates/" + std::string(TemplateName(id)) + ".txt");
}

std::string Substitute(std::string_view body, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(body.size());
  size_t i = 0;
  while (i < body.size()) {
    if (body[i] == '{') {
      size_t close = body.find('}', i + 1);
      if (close != std::string_view::npos) {
        std::string_view name = body.substr(i + 1, close - i - 1);
        bool ident = !name.empty();
        for (char c : name) ident = ident && ((c >= 'a' && c <= 'z') || c == '_');
        if (ident) {
          auto it = values.find(std::string(name));
          if (it == values.end()) throw RenderError(std::string(name));
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += body[i++];
  }
  return out;
}

std::string Render(TemplateId id, const corpus::Document& document, size_t k,
                   const std::vector<Highlight>* highlights) {
  std::map<std::string, std::string> values;
  values["document"] = document.normalized_text;
  values["k"] = std::to_string(k);
  if (document.query) values["query"] = *document.query;
  if (highlights) {
    std::string list;
    for (size_t i = 0; i < highlights->size(); ++i) {
      if (i) list += '\n';
      list += std::to_string(i + 1) + ". " + text::CollapseWhitespace((*highlights)[i].text);
    }
    values["highlights"] = list;
  }
  return Substitute(TemplateBody(id), values);
}

const std::string& FormatReminder(TemplateId id) {
  return resources::Get(ExpectsHighlights(id) ? "templates/reminder_planned.txt"
                                              : "templates/reminder_direct.txt");
}

PlannedOutput ParsePlanned(std::string_view raw) {
  PlannedOutput out;
  out.raw = std::string(raw);
  std::string body = corpus::NormalizeText(StripThinking(raw));
  std::vector<std::string> lines;
  for (auto l : text::SplitLines(body)) lines.emplace_back(l);

  std::optional<size_t> summary_line;
  std::string summary_head;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::smatch m;
    if (std::regex_match(lines[i], m, SummaryMarker())) {
      summary_line = i;
      summary_head = m[1].str();
    }
  }
  if (!summary_line) throw ParseError("no \"Summary:\" marker in model output");

  std::optional<size_t> ks_line;
  for (size_t i = 0; i < *summary_line; ++i) {
    if (std::regex_match(lines[i], KeySentencesMarker())) ks_line = i;
  }
  if (ks_line) {
    for (size_t i = *ks_line + 1; i < *summary_line; ++i) {
      std::smatch m;
      if (std::regex_match(lines[i], m, ListItem())) {
        std::string item(text::Trim(m[1].str()));
        if (!item.empty()) out.highlights.push_back(std::move(item));
      }
    }
  }

  std::string summary = summary_head;
  for (size_t i = *summary_line + 1; i < lines.size(); ++i) {
    if (std::regex_match(lines[i], KeySentencesMarker())) break;
    summary += '\n';
    summary += lines[i];
  }
  out.summary = std::string(text::Trim(summary));
  if (out.summary.empty()) throw ParseError("empty summary after \"Summary:\" marker");
  return out;
}

double TokenF1(std::string_view a, std::string_view b) {
  auto ca = Counts(a), cb = Counts(b);
  return F1FromCounts(ca, Total(ca), cb, Total(cb));
}

std::vector<Highlight> Align(const corpus::Document& document,
                             const std::vector<std::string>& texts, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ArgumentError("threshold must be in (0, 1]");
  std::vector<std::unordered_map<std::string, int>> sentence_counts;
  std::vector<size_t> sentence_totals;
  for (const auto& s : document.sentences) {
    sentence_counts.push_back(Counts(s.text));
    sentence_totals.push_back(Total(sentence_counts.back()));
  }
  std::vector<Highlight> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto counts = Counts(t);
    size_t total = Total(counts);
    double best = 0.0;
    std::optional<size_t> best_index;
    for (size_t i = 0; i < sentence_counts.size(); ++i) {
      double f1 = F1FromCounts(counts, total, sentence_counts[i], sentence_totals[i]);
      if (f1 > best) {
        best = f1;
        best_index = i;
      }
    }
    Highlight h;
    h.text = t;
    h.alignment_score = best;
    if (best_index && best >= threshold) h.source_index = best_index;
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace higen::prompts
