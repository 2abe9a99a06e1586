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

#include "higen/llm_client.h"

#include <fstream>
#include <random>
#include <thread>

#include "higen/error.h"
#include "higen/text.h"

namespace higen::llm {

using json = nlohmann::json;

json ToJson(const GenRequest& r) {
  json j = {{"model", r.model},
            {"user_prompt", r.user_prompt},
            {"temperature", r.temperature},
            {"max_tokens", r.max_tokens}};
  j["system_prompt"] = r.system_prompt ? json(*r.system_prompt) : json(nullptr);
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return j;
}

json ToJson(const GenResponse& r) {
  return {{"text", r.text},
          {"prompt_tokens", r.prompt_tokens},
          {"completion_tokens", r.completion_tokens},
          {"latency_ms", r.latency_ms}};
}

json ToJson(const ScoreRequest& r) {
  return {{"model", r.model}, {"context", r.context}, {"continuation", r.continuation}};
}

json ToJson(const ScoreResponse& r) {
  return {{"total_logprob", r.total_logprob}, {"token_count", r.token_count}};
}

GenResponse GenResponseFromJson(const json& j) {
  GenResponse r;
  r.text = j.at("text").get<std::string>();
  r.prompt_tokens = j.value("prompt_tokens", int64_t{0});
  r.completion_tokens = j.value("completion_tokens", int64_t{0});
  r.latency_ms = j.value("latency_ms", 0.0);
  return r;
}

ScoreResponse ScoreResponseFromJson(const json& j) {
  return {j.at("total_logprob").get<double>(), j.at("token_count").get<int64_t>()};
}

std::string CanonicalSerialization(const GenRequest& r) {
  json j = ToJson(r);
  j["kind"] = "generate";
  return j.dump();
}

std::string CanonicalSerialization(const ScoreRequest& r) {
  json j = ToJson(r);
  j["kind"] = "score";
  return j.dump();
}

std::string CacheKey(const GenRequest& r) { return text::Sha256Hex(CanonicalSerialization(r)); }
std::string CacheKey(const ScoreRequest& r) { return text::Sha256Hex(CanonicalSerialization(r)); }

LlmClient::LlmClient(std::shared_ptr<Backend> backend, ClientOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      in_flight_(std::max(1, options_.max_in_flight)) {
  if (!backend_) throw ArgumentError("LlmClient requires a backend");
  if (options_.cache_dir) std::filesystem::create_directories(*options_.cache_dir);
}

std::optional<json> LlmClient::Lookup(const std::string& key) {
  {
    std::lock_guard lock(memo_mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  if (!options_.cache_dir) return std::nullopt;
  std::ifstream in(*options_.cache_dir / (key + ".json"));
  if (!in) return std::nullopt;
  try {
    json entry = json::parse(in);
    json response = entry.at("response");
    std::lock_guard lock(memo_mu_);
    memo_.emplace(key, response);
    return response;
  } catch (const json::exception&) {
    // A torn or foreign file is treated as a miss and overwritten.
    return std::nullopt;
  }
}

void LlmClient::Store(const std::string& key, const json& request, const json& response) {
  {
    std::lock_guard lock(memo_mu_);
    memo_[key] = response;
  }
  if (!options_.cache_dir) return;
  auto final_path = *options_.cache_dir / (key + ".json");
  auto tmp_path = final_path;
  tmp_path += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    out << json{{"request", request}, {"response", response}}.dump(2) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) std::filesystem::remove(tmp_path, ec);
}

template <typename Fn>
auto LlmClient::CallWithRetry(Fn&& fn) -> decltype(fn()) {
  const RetryPolicy& policy = options_.retry;
  thread_local std::mt19937 jitter_rng(std::random_device{}());
  std::uniform_real_distribution<double> jitter(1.0 - policy.jitter, 1.0 + policy.jitter);
  double delay_ms = static_cast<double>(policy.base_delay.count());
  std::string last_error;
  for (int attempt = 1; attempt <= std::max(1, policy.max_attempts); ++attempt) {
    try {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<1 << 16>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      ++backend_calls_;
      return fn();
    } catch (const TransientError& e) {
      last_error = e.what();
    }
    if (attempt < policy.max_attempts) {
      std::this_thread::sleep_for(
          std::chrono::duration<double, std::milli>(delay_ms * jitter(jitter_rng)));
      delay_ms *= policy.factor;
    }
  }
  throw TransportError("retries exhausted after " + std::to_string(policy.max_attempts) +
                       " attempts: " + last_error);
}

GenResponse LlmClient::Generate(const GenRequest& request, std::string_view doc_id) {
  if (request.temperature < 0) throw ArgumentError("temperature must be >= 0");
  if (request.max_tokens < 1) throw ArgumentError("max_tokens must be >= 1");
  const std::string key = CacheKey(request);
  auto start = std::chrono::steady_clock::now();
  if (auto hit = Lookup(key)) {
    ++cache_hits_;
    GenResponse r = GenResponseFromJson(*hit);
    r.cached = true;
    r.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  GenResponse r;
  try {
    r = CallWithRetry([&] { return backend_->Generate(request); });
  } catch (const OversizeError& e) {
    if (!doc_id.empty() && e.doc_id().empty()) throw OversizeError(e.what(), std::string(doc_id));
    throw;
  }
  r.cached = false;
  r.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  Store(key, ToJson(request), ToJson(r));
  return r;
}

ScoreResponse LlmClient::ScoreContinuation(const ScoreRequest& request) {
  if (request.continuation.empty()) throw ArgumentError("continuation must be non-empty");
  const std::string key = CacheKey(request);
  if (auto hit = Lookup(key)) {
    ++cache_hits_;
    return ScoreResponseFromJson(*hit);
  }
  ScoreResponse r = CallWithRetry([&] { return backend_->Score(request); });
  Store(key, ToJson(request), ToJson(r));
  return r;
}

}  // namespace higen::llm
