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

// Command-line entry point: run, evaluate, report, highlight, attribute.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "higen/attribution.h"
#include "higen/config.h"
#include "higen/corpus.h"
#include "higen/error.h"
#include "higen/mock_backend.h"
#include "higen/pipeline.h"
#include "higen/report.h"
#include "higen/runner.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace higen;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Options shared by the single-document subcommands.
struct DocOptions {
  std::string doc_path;
  std::string kind = "prose";
  std::string query;
  std::string config_path;
  std::string backend;
  std::string model;
  size_t k = prompts::kDefaultK;
  uint64_t seed = 0;
  size_t m = 64;
};

void AddDocOptions(CLI::App* cmd, DocOptions& o) {
  cmd->add_option("--doc", o.doc_path, "Plain-text document")->required()->check(CLI::ExistingFile);
  cmd->add_option("--kind", o.kind, "prose or transcript")->check(CLI::IsMember({"prose", "transcript"}));
  cmd->add_option("--query", o.query, "Query for transcript documents");
  cmd->add_option("-c,--config", o.config_path, "Experiment config (endpoint, model, parameters)");
  cmd->add_option("--backend", o.backend, "Override the backend")->check(CLI::IsMember({"openai", "mock"}));
  cmd->add_option("--model", o.model, "Override the model");
  cmd->add_option("--seed", o.seed, "Seed for ablation masks");
  cmd->add_option("--m", o.m, "Number of ablations")->check(CLI::Range(2, 1 << 20));
}

// A config for single-document commands: loaded if given, else defaults.
config::ExperimentConfig DocConfig(const DocOptions& o) {
  config::ExperimentConfig c;
  if (!o.config_path.empty()) {
    c = config::LoadConfig(o.config_path);
  } else {
    c.methods = {pipeline::Method::kDirect};
    c.attribution.num_ablations = o.m;
    c.attribution.seed = o.seed;
    c.concurrency = 4;
  }
  if (!o.backend.empty()) c.endpoint.backend = o.backend;
  if (!o.model.empty()) c.model = o.model;
  if (c.model.empty()) c.model = c.endpoint.backend == "mock" ? "mock" : "";
  c.k = o.k;
  return c;
}

corpus::Document LoadDoc(const DocOptions& o) {
  std::optional<std::string> query;
  if (!o.query.empty()) query = o.query;
  return corpus::MakeDocument(fs::path(o.doc_path).stem().string(), ReadFile(o.doc_path),
                              corpus::ParseKind(o.kind), query);
}

json HighlightsJson(const prompts::HighlightSet& set) {
  json items = json::array();
  for (const auto& h : set.items) {
    items.push_back({{"text", h.text},
                     {"source_index", h.source_index ? json(*h.source_index) : json(nullptr)},
                     {"alignment_score", h.alignment_score}});
  }
  return {{"method", set.method}, {"k_requested", set.k_requested}, {"items", items}};
}

std::vector<std::string> MethodOrder(const fs::path& run_dir, const std::vector<report::MetricRow>& rows) {
  std::vector<std::string> order;
  std::ifstream in(run_dir / runner::kManifestFile);
  if (in) {
    json manifest = json::parse(in, nullptr, false);
    if (!manifest.is_discarded() && manifest.contains("config") && manifest["config"].contains("methods")) {
      for (const auto& m : manifest["config"]["methods"]) order.push_back(m.get<std::string>());
    }
  }
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.method) == order.end()) order.push_back(r.method);
  }
  return order;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Highlight-guided summarization experiments"};
  app.set_version_flag("--version", HIGEN_VERSION);
  app.require_subcommand(1);

  std::string config_path, run_dir, format = "md";
  std::optional<size_t> stop_after;
  std::string backend_override;

  auto* run = app.add_subcommand("run", "Generate summaries, evaluate and report");
  run->add_option("-c,--config", config_path, "Experiment config")->required();
  run->add_option("--run-dir", run_dir, "Override the config's run directory");
  run->add_option("--stop-after", stop_after, "Stop after N new records (crash simulation)");
  run->add_option("--backend", backend_override, "Override the backend")
      ->check(CLI::IsMember({"openai", "mock"}));

  auto* evaluate = app.add_subcommand("evaluate", "Recompute metrics.jsonl for a run directory");
  evaluate->add_option("-c,--config", config_path, "Experiment config")->required();
  evaluate->add_option("--run-dir", run_dir, "Run directory")->required();
  evaluate->add_option("--backend", backend_override, "Override the backend")
      ->check(CLI::IsMember({"openai", "mock"}));

  auto* rep = app.add_subcommand("report", "Aggregate metrics into a results table");
  rep->add_option("--run-dir", run_dir, "Run directory")->required();
  rep->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}));

  DocOptions hl_opts;
  std::string hl_method = "lexrank";
  auto* highlight = app.add_subcommand("highlight", "Select highlights for one document");
  highlight->add_option("--method", hl_method, "lexrank, contextcite or generative")
      ->check(CLI::IsMember({"lexrank", "contextcite", "generative"}));
  highlight->add_option("-k", hl_opts.k, "Number of highlights")->check(CLI::PositiveNumber);
  AddDocOptions(highlight, hl_opts);

  DocOptions at_opts;
  std::string response_path;
  auto* attribute = app.add_subcommand("attribute", "Attribute a response to document sentences");
  attribute->add_option("--response", response_path, "Response text file")
      ->required()
      ->check(CLI::ExistingFile);
  AddDocOptions(attribute, at_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      auto c = config::LoadConfig(config_path);
      if (!run_dir.empty()) config::SetRunDir(c, run_dir);
      if (!backend_override.empty()) {
        c.endpoint.backend = backend_override;
        c.snapshot = config::ToJson(c);
      }
      runner::RunOptions opts;
      opts.stop_after = stop_after;
      auto s = runner::Run(c, opts);
      std::cerr << "run: " << s.new_records << " new, " << s.resumed_records << " resumed, "
                << s.failed_records << " failed; backend calls " << s.backend_calls
                << ", cache hits " << s.cache_hits << "\n";
      return (s.failed_records > 0 || s.stopped_early) ? kExitRuntime : kExitOk;
    }
    if (*evaluate) {
      auto c = config::LoadConfig(config_path);
      config::SetRunDir(c, run_dir);
      if (!backend_override.empty()) {
        c.endpoint.backend = backend_override;
        c.snapshot = config::ToJson(c);
      }
      auto s = runner::Evaluate(c, run_dir);
      std::cerr << "evaluate: " << s.rows << " rows, " << s.warnings << " warnings\n";
      return kExitOk;
    }
    if (*rep) {
      auto rows = report::LoadMetricRows(fs::path(run_dir) / runner::kMetricsFile);
      auto table = report::Aggregate(rows, MethodOrder(run_dir, rows));
      report::WriteReport(table, run_dir);
      std::cout << (format == "csv" ? report::EmitCsv(table) : report::EmitMarkdown(table));
      return kExitOk;
    }
    if (*highlight) {
      auto doc = LoadDoc(hl_opts);
      auto c = DocConfig(hl_opts);
      auto params = config::PipelineParams(c);
      // LexRank makes no model calls; the client still needs a backend.
      std::shared_ptr<llm::Backend> backend =
          hl_method == "lexrank" ? std::make_shared<llm::MockBackend>() : runner::MakeBackend(c.endpoint);
      llm::LlmClient client(backend, runner::MakeClientOptions(c));
      pipeline::Summarizer summarizer(client, c.model, params);
      auto set = summarizer.Highlight(doc, pipeline::ParseHighlighter(hl_method));
      std::cout << HighlightsJson(set).dump(2) << "\n";
      return kExitOk;
    }
    if (*attribute) {
      auto doc = LoadDoc(at_opts);
      auto c = DocConfig(at_opts);
      std::string response = ReadFile(response_path);
      llm::LlmClient client(runner::MakeBackend(c.endpoint), runner::MakeClientOptions(c));
      auto result = attribution::Attribute(
          doc, response, client, c.model, c.attribution,
          [&](const std::string& ablated) { return pipeline::AttributionContext(doc, ablated, c.k); });
      json out = attribution::ToJson(result);
      json sentences = json::array();
      for (size_t i = 0; i < doc.sentences.size(); ++i) {
        sentences.push_back({{"index", i}, {"text", doc.sentences[i].text}, {"score", result.scores[i]}});
      }
      out["sentences"] = sentences;
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
