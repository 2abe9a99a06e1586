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

#ifndef HIGEN_HTTP_BACKEND_H_
#define HIGEN_HTTP_BACKEND_H_

#include <chrono>
#include <optional>
#include <string>

#include "higen/llm_client.h"

namespace higen::llm {

struct EndpointConfig {
  // e.g. "http://localhost:8000"; the "/v1/..." routes are appended.
  std::string base_url;
  std::optional<std::string> api_key;
  std::chrono::seconds timeout{600};
};

// Resolves base URL and key from HIGEN_API_BASE / the named key variable
// when the config leaves them empty.
EndpointConfig EndpointFromEnv(std::string base_url = {}, const std::string& key_env = "HIGEN_API_KEY");

// OpenAI-compatible server: chat completions for generation, completions
// with echo + logprobs for teacher-forced scoring.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(EndpointConfig config);

  GenResponse Generate(const GenRequest& request) override;
  ScoreResponse Score(const ScoreRequest& request) override;

 private:
  nlohmann::json Post(const std::string& route, const nlohmann::json& body);
  // Sums echoed logprobs from the token starting at byte `seam`; nullopt if
  // no token starts there.
  std::optional<ScoreResponse> SumFromSeam(const nlohmann::json& response, size_t seam);

  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace higen::llm

#endif  // HIGEN_HTTP_BACKEND_H_
