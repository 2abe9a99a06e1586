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

#ifndef HIGEN_LLM_CLIENT_H_
#define HIGEN_LLM_CLIENT_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_map>

#include "json.hpp"

namespace higen::llm {

struct GenRequest {
  std::string model;
  std::optional<std::string> system_prompt;
  std::string user_prompt;
  double temperature = 0.0;
  int64_t max_tokens = 1200;
  std::optional<int64_t> seed;
};

struct GenResponse {
  std::string text;
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
  double latency_ms = 0.0;
  bool cached = false;
};

// Teacher-forced scoring of `continuation` after `context`.
struct ScoreRequest {
  std::string model;
  std::string context;
  std::string continuation;
};

struct ScoreResponse {
  // Natural-log probability of the continuation, summed over its tokens.
  double total_logprob = 0.0;
  int64_t token_count = 0;
};

// Generation budgets for the two dataset families.
inline constexpr int64_t kGovReportMaxTokens = 1200;
inline constexpr int64_t kQmsumMaxTokens = 256;

nlohmann::json ToJson(const GenRequest& r);
nlohmann::json ToJson(const GenResponse& r);
nlohmann::json ToJson(const ScoreRequest& r);
nlohmann::json ToJson(const ScoreResponse& r);
GenResponse GenResponseFromJson(const nlohmann::json& j);
ScoreResponse ScoreResponseFromJson(const nlohmann::json& j);

// Canonical serialization (sorted keys, request kind tag) and its SHA-256.
std::string CanonicalSerialization(const GenRequest& r);
std::string CanonicalSerialization(const ScoreRequest& r);
std::string CacheKey(const GenRequest& r);
std::string CacheKey(const ScoreRequest& r);

// A model server. Implementations throw TransientError for retryable
// failures; every other Error is surfaced to the caller unchanged.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual GenResponse Generate(const GenRequest& request) = 0;
  virtual ScoreResponse Score(const ScoreRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  double jitter = 0.2;
};

struct ClientOptions {
  // When set, responses persist as one JSON file per request.
  std::optional<std::filesystem::path> cache_dir;
  int max_in_flight = 4;
  RetryPolicy retry;
};

// Thread-safe front end over a Backend: content-addressed caching,
// bounded concurrency and retry with exponential backoff.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<Backend> backend, ClientOptions options = {});

  LlmClient(const LlmClient&) = delete;
  LlmClient& operator=(const LlmClient&) = delete;

  // `doc_id` only annotates an OversizeError.
  GenResponse Generate(const GenRequest& request, std::string_view doc_id = {});
  ScoreResponse ScoreContinuation(const ScoreRequest& request);

  // Calls that reached the backend (each retry attempt counts).
  size_t backend_calls() const { return backend_calls_.load(); }
  size_t cache_hits() const { return cache_hits_.load(); }

  const ClientOptions& options() const { return options_; }

 private:
  std::optional<nlohmann::json> Lookup(const std::string& key);
  void Store(const std::string& key, const nlohmann::json& request, const nlohmann::json& response);

  template <typename Fn>
  auto CallWithRetry(Fn&& fn) -> decltype(fn());

  std::shared_ptr<Backend> backend_;
  ClientOptions options_;
  std::counting_semaphore<1 << 16> in_flight_;
  std::mutex memo_mu_;
  std::unordered_map<std::string, nlohmann::json> memo_;
  std::atomic<size_t> backend_calls_{0};
  std::atomic<size_t> cache_hits_{0};
};

}  // namespace higen::llm

#endif  // HIGEN_LLM_CLIENT_H_
