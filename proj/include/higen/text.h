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

#ifndef HIGEN_TEXT_H_
#define HIGEN_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace higen::text {

struct TokenSpan {
  size_t begin;
  size_t end;
};

// Lowercased runs of ASCII alphanumerics. Bytes >= 0x80 are treated as part
// of a word so UTF-8 letters are not split.
std::vector<std::string> Tokenize(std::string_view text);

// Byte offsets of the tokens Tokenize would produce.
std::vector<TokenSpan> TokenSpans(std::string_view text);

std::string_view Trim(std::string_view s);

// Runs of whitespace become one space; leading/trailing whitespace is dropped.
std::string CollapseWhitespace(std::string_view s);
std::string ToLower(std::string_view s);
bool StartsWith(std::string_view s, std::string_view prefix);

std::vector<std::string_view> SplitLines(std::string_view s);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

}  // namespace higen::text

#endif  // HIGEN_TEXT_H_
