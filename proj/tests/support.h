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

#ifndef HIGEN_TESTS_SUPPORT_H_
#define HIGEN_TESTS_SUPPORT_H_

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "higen/corpus.h"
#include "higen/llm_client.h"
#include "higen/text.h"

namespace higen::testing {

inline std::filesystem::path FixtureDir() { return HIGEN_FIXTURE_DIR; }
inline std::string Fixture(const std::string& name) { return (FixtureDir() / name).string(); }

inline std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("higen_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Backend driven by test callbacks; counts calls.
class ScriptedBackend : public llm::Backend {
 public:
  std::function<llm::GenResponse(const llm::GenRequest&)> on_generate;
  std::function<llm::ScoreResponse(const llm::ScoreRequest&)> on_score;

  llm::GenResponse Generate(const llm::GenRequest& r) override {
    {
      std::lock_guard lock(mu_);
      prompts_.push_back(r.user_prompt);
    }
    ++generate_calls;
    return on_generate(r);
  }
  llm::ScoreResponse Score(const llm::ScoreRequest& r) override {
    ++score_calls;
    return on_score(r);
  }
  std::vector<std::string> prompts() {
    std::lock_guard lock(mu_);
    return prompts_;
  }

  std::atomic<size_t> generate_calls{0};
  std::atomic<size_t> score_calls{0};

 private:
  std::mutex mu_;
  std::vector<std::string> prompts_;
};

// A document whose sentence i contains the unique marker token "m<i>".
inline corpus::Document MarkerDocument(size_t n) {
  std::string raw;
  for (size_t i = 0; i < n; ++i) {
    raw += "Sentence m" + std::to_string(i) + " reports item " + std::to_string(i) + ". ";
  }
  return corpus::MakeDocument("markers", raw, corpus::DocumentKind::kProse);
}

// Scorer whose logit is linear in which marker sentences the context keeps:
// logit = bias + sum_i w_i keep_i + N(0, sigma^2), noise seeded by context.
class LinearScorer : public llm::Backend {
 public:
  LinearScorer(std::vector<double> weights, double bias, double sigma, uint64_t seed)
      : w_(std::move(weights)), bias_(bias), sigma_(sigma), seed_(seed) {}

  llm::GenResponse Generate(const llm::GenRequest&) override { return {"Summary: unused", 1, 1}; }

  llm::ScoreResponse Score(const llm::ScoreRequest& r) override {
    auto tokens = text::Tokenize(r.context);
    double logit = bias_;
    for (size_t i = 0; i < w_.size(); ++i) {
      std::string marker = "m" + std::to_string(i);
      if (std::find(tokens.begin(), tokens.end(), marker) != tokens.end()) logit += w_[i];
    }
    std::seed_seq seq{seed_, static_cast<uint64_t>(std::hash<std::string>{}(r.context))};
    std::mt19937_64 rng(seq);
    logit += std::normal_distribution<double>(0.0, sigma_)(rng);
    // total log-prob L with L - log(1 - e^L) = logit, i.e. L = log sigmoid(logit).
    double total = logit > 0 ? -std::log1p(std::exp(-logit)) : logit - std::log1p(std::exp(logit));
    return {total, 4};
  }

 private:
  std::vector<double> w_;
  double bias_;
  double sigma_;
  uint64_t seed_;
};

}  // namespace higen::testing

#endif  // HIGEN_TESTS_SUPPORT_H_
