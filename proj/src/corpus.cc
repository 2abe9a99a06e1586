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

#include "higen/corpus.h"

#include <cctype>
#include <fstream>
#include <unordered_set>

#include "higen/error.h"
#include "higen/resources.h"
#include "higen/text.h"
#include "json.hpp"

namespace higen::corpus {
namespace {

using json = nlohmann::json;

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Length in bytes of a closing quote/bracket at `pos`, 0 if none.
size_t CloserLength(std::string_view t, size_t pos) {
  if (pos >= t.size()) return 0;
  char c = t[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (t.substr(pos, 3) == "\xE2\x80\x9D" || t.substr(pos, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

size_t OpenerLength(std::string_view t, size_t pos) {
  if (pos >= t.size()) return 0;
  char c = t[pos];
  if (c == '"' || c == '\'' || c == '(' || c == '[') return 1;
  if (t.substr(pos, 3) == "\xE2\x80\x9C" || t.substr(pos, 3) == "\xE2\x80\x98") return 3;
  return 0;
}

bool StartsSentence(std::string_view t, size_t pos) {
  size_t open = OpenerLength(t, pos);
  if (open && pos + open < t.size()) pos += open;
  if (pos >= t.size()) return false;
  unsigned char c = t[pos];
  return std::isupper(c) || std::isdigit(c);
}

// True when the '.' ending at `dot` closes a listed abbreviation.
bool IsProtectedPeriod(std::string_view t, size_t region_begin, size_t dot) {
  size_t w = dot;
  while (w > region_begin && !IsSpace(t[w - 1])) --w;
  while (w < dot && OpenerLength(t, w)) w += OpenerLength(t, w);
  std::string_view word = t.substr(w, dot - w + 1);
  return resources::Abbreviations().contains(text::ToLower(word));
}

void EmitSentence(std::string_view t, size_t begin, size_t end,
                  const std::optional<std::string>& speaker, std::vector<Sentence>& out) {
  while (begin < end && IsSpace(t[begin])) ++begin;
  while (end > begin && IsSpace(t[end - 1])) --end;
  if (begin == end) return;
  Sentence s;
  s.index = out.size();
  s.text = std::string(t.substr(begin, end - begin));
  s.span = {begin, end};
  s.speaker = speaker;
  out.push_back(std::move(s));
}

void SegmentProseRegion(std::string_view t, size_t begin, size_t end,
                        const std::optional<std::string>& speaker, std::vector<Sentence>& out) {
  size_t start = begin;
  size_t i = begin;
  while (i < end) {
    if (!IsTerminal(t[i])) {
      ++i;
      continue;
    }
    size_t run_end = i;
    while (run_end < end && IsTerminal(t[run_end])) ++run_end;
    size_t close = run_end;
    while (close < end) {
      size_t len = CloserLength(t, close);
      if (!len) break;
      close += len;
    }
    if (close >= end || !IsSpace(t[close])) {
      i = run_end;
      continue;
    }
    size_t next = close;
    while (next < end && IsSpace(t[next])) ++next;
    bool boundary = next < end && next <= end && StartsSentence(t.substr(0, end), next);
    if (boundary && run_end - i == 1 && t[i] == '.' && IsProtectedPeriod(t, begin, i)) {
      boundary = false;
    }
    if (boundary) {
      EmitSentence(t, start, close, speaker, out);
      start = next;
      i = next;
    } else {
      i = run_end;
    }
  }
  EmitSentence(t, start, end, speaker, out);
}

// Recognizes `Name: utterance`. Returns the utterance offset within the line
// and the speaker name.
std::optional<std::pair<size_t, std::string>> MatchSpeaker(std::string_view line) {
  size_t b = 0;
  while (b < line.size() && IsSpace(line[b])) ++b;
  size_t colon = line.find(':', b);
  if (colon == std::string_view::npos || colon == b || colon - b > 48) return std::nullopt;
  std::string_view name = text::Trim(line.substr(b, colon - b));
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return std::nullopt;
  int words = 1;
  for (char c : name) {
    unsigned char u = c;
    if (c == ' ') {
      ++words;
    } else if (!(std::isalnum(u) || c == '.' || c == '\'' || c == '-' || c == '_')) {
      return std::nullopt;
    }
  }
  if (words > 5) return std::nullopt;
  size_t after = colon + 1;
  if (after < line.size() && !IsSpace(line[after])) return std::nullopt;
  return std::make_pair(after, std::string(name));
}

bool IsFenceLine(std::string_view line) {
  line = text::Trim(line);
  if (line.size() < 4) return false;
  for (char c : line) {
    if (c != '=') return false;
  }
  return true;
}

std::string JsonString(const json& obj, const std::string& field, size_t line_no, bool required) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    if (required) throw DatasetError("missing required field '" + field + "'", line_no);
    return {};
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) return it->dump();
  throw DatasetError("field '" + field + "' must be a string", line_no);
}

}  // namespace

std::string_view KindName(DocumentKind kind) {
  return kind == DocumentKind::kProse ? "prose" : "transcript";
}

DocumentKind ParseKind(std::string_view name) {
  if (name == "prose") return DocumentKind::kProse;
  if (name == "transcript") return DocumentKind::kTranscript;
  throw ArgumentError("unknown document kind: " + std::string(name));
}

std::string Document::JoinedText() const {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    if (kind == DocumentKind::kTranscript && s.speaker) out += *s.speaker + ": ";
    out += s.text;
  }
  return out;
}

std::string NormalizeText(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    unsigned char c = raw[i];
    if (c == '\r') {
      out += '\n';
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else if (c == '\n' || c == '\t') {
      out += static_cast<char>(c);
    } else if (c < 0x20 || c == 0x7f) {
      continue;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::vector<Sentence> SegmentSentences(std::string_view text, DocumentKind kind) {
  std::vector<Sentence> out;
  if (kind == DocumentKind::kProse) {
    SegmentProseRegion(text, 0, text.size(), std::nullopt, out);
    return out;
  }
  // Transcript: walk lines, accumulating continuation lines into the open turn.
  std::optional<std::string> speaker;
  size_t turn_begin = 0;
  bool open = false;
  size_t pos = 0;
  auto close_turn = [&](size_t end) {
    if (open) SegmentProseRegion(text, turn_begin, end, speaker ? speaker : "Unknown", out);
  };
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, line_end - pos);
    if (auto match = MatchSpeaker(line)) {
      close_turn(pos);
      speaker = match->second;
      turn_begin = pos + match->first;
      open = true;
    } else if (!open && !text::Trim(line).empty()) {
      speaker = std::nullopt;
      turn_begin = pos;
      open = true;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  close_turn(text.size());
  for (size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

Document MakeDocument(std::string id, std::string raw, DocumentKind kind,
                      std::optional<std::string> query, std::optional<std::string> reference) {
  Document doc;
  doc.id = std::move(id);
  doc.normalized_text = NormalizeText(raw);
  doc.raw_text = std::move(raw);
  doc.kind = kind;
  doc.sentences = SegmentSentences(doc.normalized_text, kind);
  doc.query = std::move(query);
  doc.reference_summary = std::move(reference);
  return doc;
}

std::pair<std::optional<std::string>, std::string> SplitQueryPrefix(std::string_view input) {
  auto lines = text::SplitLines(input);
  size_t offset = 0;
  std::optional<size_t> fence_begin, fence_end, body_begin, body_end;
  for (const auto& line : lines) {
    if (IsFenceLine(line)) {
      if (!fence_begin) {
        fence_begin = offset;
        body_begin = offset + line.size() + 1;
      } else if (!fence_end) {
        fence_end = offset;
        body_end = offset;
        break;
      }
    }
    offset += line.size() + 1;
  }
  if (fence_begin) {
    std::string_view q = text::Trim(input.substr(0, *fence_begin));
    size_t b = std::min(*body_begin, input.size());
    size_t e = body_end ? *body_end : input.size();
    std::string body(text::Trim(input.substr(b, e - b)));
    return {q.empty() ? std::nullopt : std::optional<std::string>(q), body};
  }
  size_t para = input.find("\n\n");
  if (para != std::string_view::npos) {
    std::string_view head = text::Trim(input.substr(0, para));
    if (!head.empty() && !MatchSpeaker(head)) {
      return {std::string(head), std::string(text::Trim(input.substr(para + 2)))};
    }
  }
  return {std::nullopt, std::string(text::Trim(input))};
}

DatasetSchema ParseSchema(std::string_view name) {
  if (name == "scrolls_govreport") return DatasetSchema::kScrollsGovReport;
  if (name == "scrolls_qmsum") return DatasetSchema::kScrollsQmsum;
  if (name == "generic_jsonl") return DatasetSchema::kGenericJsonl;
  throw ArgumentError("unknown dataset schema: " + std::string(name));
}

std::string_view SchemaName(DatasetSchema schema) {
  switch (schema) {
    case DatasetSchema::kScrollsGovReport: return "scrolls_govreport";
    case DatasetSchema::kScrollsQmsum: return "scrolls_qmsum";
    case DatasetSchema::kGenericJsonl: return "generic_jsonl";
  }
  return "";
}

std::vector<Document> LoadDataset(const std::string& path, DatasetSchema schema,
                                  std::optional<size_t> limit, const FieldMap& fields) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset file " + path);
  std::vector<Document> docs;
  if (limit && *limit == 0) return docs;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  FieldMap map = schema == DatasetSchema::kGenericJsonl ? fields : FieldMap{};
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw DatasetError("expected a JSON object", line_no);
    std::string id = JsonString(obj, map.id_field, line_no, true);
    if (id.empty()) throw DatasetError("empty id", line_no);
    if (!seen.insert(id).second) throw DatasetError("duplicate id '" + id + "'", line_no);
    std::string input = JsonString(obj, map.input_field, line_no, true);
    std::optional<std::string> reference;
    if (obj.contains(map.output_field) && !obj[map.output_field].is_null()) {
      reference = JsonString(obj, map.output_field, line_no, true);
    }
    switch (schema) {
      case DatasetSchema::kScrollsGovReport:
        docs.push_back(MakeDocument(id, input, DocumentKind::kProse, std::nullopt, reference));
        break;
      case DatasetSchema::kScrollsQmsum: {
        auto [query, transcript] = SplitQueryPrefix(NormalizeText(input));
        Document doc = MakeDocument(id, transcript, DocumentKind::kTranscript, query, reference);
        doc.raw_text = input;
        docs.push_back(std::move(doc));
        break;
      }
      case DatasetSchema::kGenericJsonl: {
        std::optional<std::string> query;
        if (map.query_field) {
          std::string q = JsonString(obj, *map.query_field, line_no, false);
          if (!q.empty()) query = q;
        }
        docs.push_back(MakeDocument(id, input, map.kind, query, reference));
        break;
      }
    }
    if (limit && docs.size() >= *limit) break;
  }
  return docs;
}

}  // namespace higen::corpus
