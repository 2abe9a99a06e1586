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

#ifndef HIGEN_CONFIG_H_
#define HIGEN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "higen/attribution.h"
#include "higen/corpus.h"
#include "higen/lexrank.h"
#include "higen/pipeline.h"
#include "json.hpp"

namespace higen::config {

struct DatasetConfig {
  std::string path;
  corpus::DatasetSchema schema = corpus::DatasetSchema::kScrollsGovReport;
  std::optional<size_t> limit;
  // Shuffle before applying `limit` (sample selection); documents are
  // always processed in doc-id order.
  std::optional<uint64_t> shuffle_seed;
  corpus::FieldMap fields;
  std::string name;
};

struct EndpointConfig {
  std::string backend = "openai";  // "openai" or "mock"
  std::string base_url;            // falls back to HIGEN_API_BASE
  std::string auth_env = "HIGEN_API_KEY";
  int timeout_s = 600;
  int max_attempts = 5;
  int64_t base_delay_ms = 1000;
};

struct ExternalScores {
  std::string name;
  std::string path;
  // Restricts the scores to one method; otherwise they join every method.
  std::optional<std::string> method;
};

struct MetricsConfig {
  bool enable_factscore = false;
  std::vector<ExternalScores> external_scores;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  std::vector<pipeline::Method> methods;
  std::string model;
  std::string judge_model;
  size_t k = 30;
  double temperature = 0.0;
  int64_t max_tokens = 0;
  double align_threshold = 0.6;
  EndpointConfig endpoint;
  int concurrency = 4;
  std::string cache_dir;
  std::string run_dir;
  uint64_t seed = 0;
  attribution::Params attribution;
  lexrank::Params lexrank;
  MetricsConfig metrics;
  bool debug_dumps = false;
  // Set when cache_dir was defaulted to <run_dir>/cache.
  bool cache_follows_run_dir = false;

  // The resolved, defaulted configuration as written to the manifest.
  nlohmann::json snapshot;
};

// Parses JSON (comments allowed), fills defaults and validates. Relative
// paths resolve against `base_dir`. Throws ConfigError naming the field.
ExperimentConfig FromJson(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig LoadConfig(const std::string& path);
nlohmann::json ToJson(const ExperimentConfig& c);

// Points the config at another run directory; a defaulted cache moves with it.
void SetRunDir(ExperimentConfig& c, const std::string& run_dir);

pipeline::Params PipelineParams(const ExperimentConfig& c);

}  // namespace higen::config

#endif  // HIGEN_CONFIG_H_
