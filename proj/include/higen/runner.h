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

#ifndef HIGEN_RUNNER_H_
#define HIGEN_RUNNER_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "higen/config.h"
#include "higen/corpus.h"
#include "higen/llm_client.h"
#include "higen/pipeline.h"
#include "json.hpp"

namespace higen::runner {

inline constexpr char kOutputsFile[] = "outputs.jsonl";
inline constexpr char kMetricsFile[] = "metrics.jsonl";
inline constexpr char kManifestFile[] = "manifest.json";

struct RunOptions {
  // Simulates a crash: records beyond the first `stop_after` new ones are
  // discarded and no further tasks start.
  std::optional<size_t> stop_after;
  // Replaces the backend named by the config (tests).
  std::shared_ptr<llm::Backend> backend;
  // Skip metrics, manifest and report after the generation phase.
  bool generate_only = false;
};

struct RunSummary {
  std::filesystem::path run_dir;
  size_t corpus_size = 0;
  size_t new_records = 0;
  size_t resumed_records = 0;
  size_t failed_records = 0;
  bool stopped_early = false;
  size_t backend_calls = 0;
  size_t cache_hits = 0;
};

struct EvalSummary {
  size_t rows = 0;
  size_t warnings = 0;
  size_t backend_calls = 0;
};

std::shared_ptr<llm::Backend> MakeBackend(const config::EndpointConfig& endpoint);
llm::ClientOptions MakeClientOptions(const config::ExperimentConfig& c);

// Dataset selection: optional shuffle, then limit, then doc-id order.
std::vector<corpus::Document> LoadCorpus(const config::DatasetConfig& dataset);

// Parses outputs.jsonl. A torn final line (a crash mid-write) is ignored
// and, when `repair` is set, truncated away.
std::vector<pipeline::SummaryRecord> ReadOutputs(const std::filesystem::path& path,
                                                 bool repair = false);

// Generates every missing (document, method) record, then evaluates,
// writes the manifest and the report.
RunSummary Run(const config::ExperimentConfig& c, const RunOptions& options = {});

// Recomputes metrics.jsonl from the run directory's outputs.jsonl. Rows are
// sorted by doc id, method (config order) and metric.
EvalSummary Evaluate(const config::ExperimentConfig& c, const std::filesystem::path& run_dir,
                     const RunOptions& options = {});
EvalSummary Evaluate(const config::ExperimentConfig& c, const std::filesystem::path& run_dir,
                     llm::LlmClient& judge);

nlohmann::json BuildManifest(const config::ExperimentConfig& c, const RunSummary& summary,
                             const std::string& started, const std::string& finished,
                             size_t degenerate_documents);

}  // namespace higen::runner

#endif  // HIGEN_RUNNER_H_
