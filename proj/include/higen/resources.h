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

#ifndef HIGEN_RESOURCES_H_
#define HIGEN_RESOURCES_H_

#include <string>
#include <string_view>
#include <unordered_set>

namespace higen::resources {

// Contents of a file under resources/, e.g. "templates/e2e_gov.txt", with a
// single trailing newline removed. Throws higen::Error if absent.
const std::string& Get(std::string_view relative_path);

// Non-comment, non-empty lines of a list resource.
std::unordered_set<std::string> LoadWordList(std::string_view relative_path);

const std::unordered_set<std::string>& Abbreviations();
const std::unordered_set<std::string>& Stopwords();

}  // namespace higen::resources

#endif  // HIGEN_RESOURCES_H_
