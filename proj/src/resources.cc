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

#include "higen/resources.h"

#include <map>
#include <mutex>

#include "higen/error.h"
#include "higen/text.h"

namespace higen::resources {
namespace internal {
const std::map<std::string, std::string>& Embedded();
}  // namespace internal

const std::string& Get(std::string_view relative_path) {
  static std::once_flag once;
  static std::map<std::string, std::string> trimmed;
  std::call_once(once, [] {
    for (const auto& [path, content] : internal::Embedded()) {
      std::string body = content;
      if (!body.empty() && body.back() == '\n') body.pop_back();
      trimmed.emplace(path, std::move(body));
    }
  });
  auto it = trimmed.find(std::string(relative_path));
  if (it == trimmed.end()) {
    throw Error("resource", "unknown resource: " + std::string(relative_path));
  }
  return it->second;
}

std::unordered_set<std::string> LoadWordList(std::string_view relative_path) {
  std::unordered_set<std::string> words;
  for (auto line : text::SplitLines(Get(relative_path))) {
    line = text::Trim(line);
    if (line.empty() || line.front() == '#') continue;
    words.insert(text::ToLower(line));
  }
  return words;
}

const std::unordered_set<std::string>& Abbreviations() {
  static const auto kWords = LoadWordList("abbreviations.txt");
  return kWords;
}

const std::unordered_set<std::string>& Stopwords() {
  static const auto kWords = LoadWordList("stopwords.txt");
  return kWords;
}

}  // namespace higen::resources
