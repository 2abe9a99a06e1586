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

#include "higen/http_backend.h"

#include <cstdlib>

#include "higen/error.h"
#include "higen/text.h"
#include "httplib.h"

namespace higen::llm {
namespace {

using json = nlohmann::json;

std::string Excerpt(const std::string& body) {
  constexpr size_t kMax = 300;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

bool LooksLikeContextOverflow(const std::string& body) {
  std::string lower = text::ToLower(body);
  for (const char* needle : {"context length", "context_length", "maximum context",
                             "prompt is too long", "too many tokens", "context window"}) {
    if (lower.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

EndpointConfig EndpointFromEnv(std::string base_url, const std::string& key_env) {
  EndpointConfig config;
  if (base_url.empty()) {
    if (const char* env = std::getenv("HIGEN_API_BASE")) base_url = env;
  }
  config.base_url = std::move(base_url);
  if (const char* key = std::getenv(key_env.empty() ? "HIGEN_API_KEY" : key_env.c_str())) {
    if (*key) config.api_key = key;
  }
  return config;
}

HttpBackend::HttpBackend(EndpointConfig config) : config_(std::move(config)) {
  std::string url = config_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  if (url.empty()) throw ConfigError("endpoint base_url is empty (set HIGEN_API_BASE)");
  size_t scheme_end = url.find("://");
  size_t path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  // Accept base URLs given with or without the trailing /v1.
  if (path_prefix_.size() >= 3 && path_prefix_.substr(path_prefix_.size() - 3) == "/v1") {
    path_prefix_.resize(path_prefix_.size() - 3);
  }
}

json HttpBackend::Post(const std::string& route, const json& body) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (config_.api_key) headers.emplace("Authorization", "Bearer " + *config_.api_key);
  auto res = client.Post(path_prefix_ + route, headers, body.dump(), "application/json");
  if (!res) {
    throw TransientError("request to " + route + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransientError("HTTP " + std::to_string(res->status) + ": " + Excerpt(res->body));
  }
  if (res->status != 200) {
    if ((res->status == 400 || res->status == 413) && LooksLikeContextOverflow(res->body)) {
      throw OversizeError("backend rejected prompt length: " + Excerpt(res->body));
    }
    throw EndpointError(res->status, Excerpt(res->body));
  }
  try {
    return json::parse(res->body);
  } catch (const json::parse_error&) {
    throw EndpointError(res->status, "non-JSON response: " + Excerpt(res->body));
  }
}

GenResponse HttpBackend::Generate(const GenRequest& request) {
  json messages = json::array();
  if (request.system_prompt) messages.push_back({{"role", "system"}, {"content", *request.system_prompt}});
  messages.push_back({{"role", "user"}, {"content", request.user_prompt}});
  json body = {{"model", request.model},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  if (request.seed) body["seed"] = *request.seed;
  json reply = Post("/v1/chat/completions", body);
  GenResponse response;
  try {
    const json& content = reply.at("choices").at(0).at("message").at("content");
    response.text = content.is_null() ? "" : content.get<std::string>();
    if (reply.contains("usage") && reply["usage"].is_object()) {
      response.prompt_tokens = reply["usage"].value("prompt_tokens", int64_t{0});
      response.completion_tokens = reply["usage"].value("completion_tokens", int64_t{0});
    }
  } catch (const json::exception& e) {
    throw EndpointError(200, std::string("unexpected chat response shape: ") + e.what());
  }
  return response;
}

std::optional<ScoreResponse> HttpBackend::SumFromSeam(const json& reply, size_t seam) {
  const json* logprobs = nullptr;
  try {
    logprobs = &reply.at("choices").at(0).at("logprobs");
  } catch (const json::exception&) {
  }
  if (!logprobs || logprobs->is_null() || !logprobs->contains("token_logprobs") ||
      !logprobs->contains("text_offset")) {
    throw CapabilityError(
        "backend did not return echoed token logprobs; use a server that supports "
        "echo=true with logprobs on /v1/completions");
  }
  const json& values = (*logprobs)["token_logprobs"];
  const json& offsets = (*logprobs)["text_offset"];
  if (values.size() != offsets.size()) throw CapabilityError("logprob/offset arrays differ in length");
  size_t first = values.size();
  for (size_t i = 0; i < offsets.size(); ++i) {
    size_t off = offsets[i].get<size_t>();
    if (off == seam) {
      first = i;
      break;
    }
    if (off > seam) return std::nullopt;
  }
  if (first == values.size()) return std::nullopt;
  ScoreResponse out;
  for (size_t i = first; i < values.size(); ++i) {
    if (values[i].is_null()) {
      // Only the very first prompt token lacks a logprob.
      if (i == 0) continue;
      throw CapabilityError("null logprob inside the continuation");
    }
    out.total_logprob += values[i].get<double>();
    ++out.token_count;
  }
  if (out.token_count == 0) return std::nullopt;
  out.total_logprob = std::min(0.0, out.total_logprob);
  return out;
}

ScoreResponse HttpBackend::Score(const ScoreRequest& request) {
  auto attempt = [&](const std::string& continuation) {
    json body = {{"model", request.model},
                 {"prompt", request.context + continuation},
                 {"max_tokens", 0},
                 {"echo", true},
                 {"logprobs", 1}};
    return SumFromSeam(Post("/v1/completions", body), request.context.size());
  };
  if (auto r = attempt(request.continuation)) return *r;
  if (auto r = attempt(" " + request.continuation)) return *r;
  throw AlignmentError("continuation does not start on a token boundary of the echoed prompt");
}

}  // namespace higen::llm
