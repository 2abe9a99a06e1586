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

#ifndef HIGEN_CORPUS_H_
#define HIGEN_CORPUS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace higen::corpus {

enum class DocumentKind { kProse, kTranscript };

std::string_view KindName(DocumentKind kind);
DocumentKind ParseKind(std::string_view name);

// Half-open byte range into Document::normalized_text.
struct Span {
  size_t begin = 0;
  size_t end = 0;
};

struct Sentence {
  size_t index = 0;
  std::string text;
  Span span;
  // Set for every sentence of a transcript.
  std::optional<std::string> speaker;
};

struct Document {
  std::string id;
  std::string raw_text;
  std::string normalized_text;
  std::vector<Sentence> sentences;
  std::optional<std::string> query;
  std::optional<std::string> reference_summary;
  DocumentKind kind = DocumentKind::kProse;

  size_t size() const { return sentences.size(); }
  // Fewer than two sentences: accepted, but highlight selection degenerates.
  bool degenerate() const { return sentences.size() < 2; }
  // Sentence texts joined by single spaces; transcript turns keep
  // their "Speaker: " prefix.
  std::string JoinedText() const;
};

// Canonicalizes newlines (CRLF and lone CR become LF) and drops control
// characters other than newline and tab.
std::string NormalizeText(std::string_view raw);

// `text` must already be normalized. Prose mode splits after . ! ? (plus any
// closing quotes or brackets) when followed by whitespace and an uppercase
// letter or digit, unless the word is a listed abbreviation. Transcript mode first splits `Speaker: utterance`
// turns, then applies prose rules within each utterance.
std::vector<Sentence> SegmentSentences(std::string_view text, DocumentKind kind);

// Normalizes and segments `raw`.
Document MakeDocument(std::string id, std::string raw, DocumentKind kind,
                      std::optional<std::string> query = std::nullopt,
                      std::optional<std::string> reference = std::nullopt);

// Splits a QMSum-style input into (query, transcript). The query is the text
// before the first line made of four or more '='; the transcript runs to the
// next such line. Without a fence, a leading paragraph that is not a
// speaker turn is taken as the query.
std::pair<std::optional<std::string>, std::string> SplitQueryPrefix(std::string_view input);

enum class DatasetSchema { kScrollsGovReport, kScrollsQmsum, kGenericJsonl };

DatasetSchema ParseSchema(std::string_view name);
std::string_view SchemaName(DatasetSchema schema);

// Field mapping for kGenericJsonl.
struct FieldMap {
  std::string id_field = "id";
  std::string input_field = "input";
  std::string output_field = "output";
  std::optional<std::string> query_field;
  DocumentKind kind = DocumentKind::kProse;
};

// Reads one JSON object per line (blank lines skipped). Throws DatasetError
// carrying the line number for malformed lines, missing required fields, and
// duplicate ids.
std::vector<Document> LoadDataset(const std::string& path, DatasetSchema schema,
                                  std::optional<size_t> limit = std::nullopt,
                                  const FieldMap& fields = {});

}  // namespace higen::corpus

#endif  // HIGEN_CORPUS_H_
