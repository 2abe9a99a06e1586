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

#include "higen/runner.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "higen/error.h"
#include "higen/http_backend.h"
#include "higen/metrics.h"
#include "higen/mock_backend.h"
#include "higen/parallel.h"
#include "higen/report.h"

namespace higen::runner {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string Utc() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

using Pair = std::pair<std::string, pipeline::Method>;

size_t MethodIndex(const config::ExperimentConfig& c, const std::string& name) {
  for (size_t i = 0; i < c.methods.size(); ++i) {
    if (pipeline::MethodName(c.methods[i]) == name) return i;
  }
  return c.methods.size();
}

// Appends records to outputs.jsonl, one flushed line each.
class Writer {
 public:
  Writer(const fs::path& path, std::optional<size_t> limit) : limit_(limit) {
    out_.open(path, std::ios::app | std::ios::binary);
    if (!out_) throw Error("io", "cannot open " + path.string());
  }

  // False once the simulated crash point has been reached.
  bool Append(const pipeline::SummaryRecord& record) {
    std::lock_guard lock(mu_);
    if (limit_ && written_ >= *limit_) {
      stopped_ = true;
      return false;
    }
    out_ << pipeline::ToJson(record).dump() << '\n';
    out_.flush();
    if (!out_) throw Error("io", "write to outputs.jsonl failed");
    ++written_;
    if (!record.ok()) ++failed_;
    return true;
  }

  bool stopped() {
    std::lock_guard lock(mu_);
    return stopped_ || (limit_ && written_ >= *limit_);
  }
  size_t written() const { return written_; }
  size_t failed() const { return failed_; }

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::optional<size_t> limit_;
  size_t written_ = 0;
  size_t failed_ = 0;
  bool stopped_ = false;
};

void WriteFileAtomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("io", "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

json Row(const std::string& doc, const std::string& method, const std::string& metric,
         std::optional<double> value) {
  return {{"doc_id", doc}, {"method", method}, {"metric", metric},
          {"value", value ? json(*value) : json(nullptr)}};
}

}  // namespace

std::shared_ptr<llm::Backend> MakeBackend(const config::EndpointConfig& endpoint) {
  if (endpoint.backend == "mock") return std::make_shared<llm::MockBackend>();
  auto ep = llm::EndpointFromEnv(endpoint.base_url, endpoint.auth_env);
  if (ep.base_url.empty()) {
    throw ConfigError("endpoint.base_url is empty and HIGEN_API_BASE is not set");
  }
  ep.timeout = std::chrono::seconds(endpoint.timeout_s);
  return std::make_shared<llm::HttpBackend>(ep);
}

llm::ClientOptions MakeClientOptions(const config::ExperimentConfig& c) {
  llm::ClientOptions o;
  if (!c.cache_dir.empty()) o.cache_dir = c.cache_dir;
  o.max_in_flight = c.concurrency;
  o.retry.max_attempts = c.endpoint.max_attempts;
  o.retry.base_delay = std::chrono::milliseconds(c.endpoint.base_delay_ms);
  return o;
}

std::vector<corpus::Document> LoadCorpus(const config::DatasetConfig& dataset) {
  auto docs = corpus::LoadDataset(dataset.path, dataset.schema, std::nullopt, dataset.fields);
  if (dataset.shuffle_seed) {
    std::mt19937_64 rng(*dataset.shuffle_seed);
    // Fisher-Yates with an explicit draw so the order does not depend on the
    // standard library's shuffle implementation.
    for (size_t i = docs.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng() % i);
      std::swap(docs[i - 1], docs[j]);
    }
  }
  if (dataset.limit && docs.size() > *dataset.limit) docs.resize(*dataset.limit);
  std::sort(docs.begin(), docs.end(),
            [](const corpus::Document& a, const corpus::Document& b) { return a.id < b.id; });
  return docs;
}

std::vector<pipeline::SummaryRecord> ReadOutputs(const fs::path& path, bool repair) {
  std::vector<pipeline::SummaryRecord> records;
  std::ifstream in(path, std::ios::binary);
  if (!in) return records;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  size_t pos = 0, good_end = 0, line_no = 0;
  while (pos < content.size()) {
    size_t nl = content.find('\n', pos);
    bool terminated = nl != std::string::npos;
    std::string line = content.substr(pos, terminated ? nl - pos : std::string::npos);
    size_t next = terminated ? nl + 1 : content.size();
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      pos = next;
      if (terminated) good_end = next;
      continue;
    }
    // An unterminated last line is a torn write.
    if (!terminated) break;
    try {
      records.push_back(pipeline::RecordFromJson(json::parse(line)));
      good_end = next;
    } catch (const std::exception&) {
      if (next < content.size()) {
        throw DatasetError(path.string() + ": corrupt record", line_no);
      }
      // Torn tail from an interrupted write.
      break;
    }
    pos = next;
  }
  if (repair && good_end < content.size()) fs::resize_file(path, good_end);
  return records;
}

RunSummary Run(const config::ExperimentConfig& c, const RunOptions& options) {
  const std::string started = Utc();
  const fs::path run_dir = c.run_dir;
  fs::create_directories(run_dir);
  if (c.debug_dumps) fs::create_directories(run_dir / "debug");
  auto docs = LoadCorpus(c.dataset);

  RunSummary summary;
  summary.run_dir = run_dir;
  summary.corpus_size = docs.size();

  const fs::path outputs = run_dir / kOutputsFile;
  std::set<Pair> done;
  for (const auto& r : ReadOutputs(outputs, /*repair=*/true)) done.emplace(r.doc_id, r.method);
  summary.resumed_records = done.size();

  std::vector<std::pair<const corpus::Document*, pipeline::Method>> tasks;
  for (const auto& d : docs) {
    for (auto m : c.methods) {
      if (!done.contains({d.id, m})) tasks.emplace_back(&d, m);
    }
  }

  auto backend = options.backend ? options.backend : MakeBackend(c.endpoint);
  llm::LlmClient client(backend, MakeClientOptions(c));
  pipeline::Summarizer summarizer(client, c.model, config::PipelineParams(c));
  Writer writer(outputs, options.stop_after);

  ParallelFor(tasks.size(), static_cast<size_t>(c.concurrency), [&](size_t i) {
    if (writer.stopped()) return;
    const auto& [doc, method] = tasks[i];
    pipeline::SummaryRecord record;
    try {
      record = summarizer.Run(*doc, method);
    } catch (const std::exception& e) {
      record = {};
      record.doc_id = doc->id;
      record.method = method;
      record.model = c.model;
      const auto* err = dynamic_cast<const Error*>(&e);
      record.failure = pipeline::Failure{"runner", err ? err->kind() : "internal", e.what(), ""};
    }
    writer.Append(record);
  });

  summary.new_records = writer.written();
  summary.failed_records = writer.failed();
  summary.stopped_early = writer.stopped() && writer.written() < tasks.size();
  if (!options.generate_only && !summary.stopped_early) {
    Evaluate(c, run_dir, client);
    auto table = report::Aggregate(report::LoadMetricRows(run_dir / kMetricsFile),
                                   [&] {
                                     std::vector<std::string> names;
                                     for (auto m : c.methods) names.emplace_back(pipeline::MethodName(m));
                                     return names;
                                   }(),
                                   c.dataset.name, c.model);
    report::WriteReport(table, run_dir);
  }
  summary.backend_calls = client.backend_calls();
  summary.cache_hits = client.cache_hits();
  size_t degenerate = static_cast<size_t>(
      std::count_if(docs.begin(), docs.end(), [](const auto& d) { return d.degenerate(); }));
  WriteFileAtomic(run_dir / kManifestFile,
                  BuildManifest(c, summary, started, Utc(), degenerate).dump(2) + "\n");
  return summary;
}

EvalSummary Evaluate(const config::ExperimentConfig& c, const fs::path& run_dir,
                     const RunOptions& options) {
  auto backend = options.backend ? options.backend : MakeBackend(c.endpoint);
  llm::LlmClient client(backend, MakeClientOptions(c));
  return Evaluate(c, run_dir, client);
}

EvalSummary Evaluate(const config::ExperimentConfig& c, const fs::path& run_dir,
                     llm::LlmClient& judge) {
  const fs::path outputs = run_dir / kOutputsFile;
  if (!fs::exists(outputs)) throw Error("io", "missing " + outputs.string());
  auto docs = LoadCorpus(c.dataset);
  std::map<std::string, const corpus::Document*> by_id;
  for (const auto& d : docs) by_id[d.id] = &d;

  std::vector<pipeline::SummaryRecord> records;
  for (auto& r : ReadOutputs(outputs)) {
    if (r.ok() && by_id.contains(r.doc_id)) records.push_back(std::move(r));
  }
  std::sort(records.begin(), records.end(), [&](const auto& a, const auto& b) {
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    return MethodIndex(c, std::string(pipeline::MethodName(a.method))) <
           MethodIndex(c, std::string(pipeline::MethodName(b.method)));
  });

  struct Keyed {
    size_t record;
    json row;
  };
  std::vector<Keyed> rows;
  EvalSummary out;
  const size_t before = judge.backend_calls();

  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<size_t> pair_record;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& doc = *by_id[records[i].doc_id];
    if (doc.reference_summary) {
      pairs.emplace_back(records[i].summary, *doc.reference_summary);
      pair_record.push_back(i);
    }
  }
  auto rouge = metrics::RougeLBatch(pairs);
  std::vector<std::optional<metrics::RougeScore>> rouge_by_record(records.size());
  for (size_t p = 0; p < pairs.size(); ++p) rouge_by_record[pair_record[p]] = rouge[p];

  std::vector<metrics::FactReport> facts(records.size());
  if (c.metrics.enable_factscore) {
    metrics::JudgeConfig jc;
    jc.model = c.judge_model;
    jc.max_parallel = static_cast<size_t>(c.concurrency);
    ParallelFor(records.size(), static_cast<size_t>(c.concurrency), [&](size_t i) {
      const auto& doc = *by_id[records[i].doc_id];
      try {
        facts[i] = metrics::FactScore(records[i].summary, doc.JoinedText(), judge, jc);
      } catch (const Error& e) {
        facts[i].error = e.what();
      }
    });
  }

  std::vector<std::pair<config::ExternalScores, std::map<std::string, double>>> externals;
  for (const auto& e : c.metrics.external_scores) {
    externals.emplace_back(e, metrics::LoadExternalScores(e.path));
  }
  std::sort(externals.begin(), externals.end(),
            [](const auto& a, const auto& b) { return a.first.name < b.first.name; });

  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string method(pipeline::MethodName(r.method));
    if (rouge_by_record[i]) {
      json row = Row(r.doc_id, method, "rouge_l", rouge_by_record[i]->f1);
      row["precision"] = rouge_by_record[i]->precision;
      row["recall"] = rouge_by_record[i]->recall;
      rows.push_back({i, std::move(row)});
    } else {
      json row = Row(r.doc_id, method, "warning", std::nullopt);
      row["message"] = "missing reference summary; rouge_l skipped";
      rows.push_back({i, std::move(row)});
      ++out.warnings;
    }
    if (c.metrics.enable_factscore) {
      json row = Row(r.doc_id, method, "factscore", facts[i].score);
      size_t supported = 0, unsupported = 0;
      for (const auto& [fact, verdict] : facts[i].facts) {
        if (verdict == metrics::Verdict::kSupported) ++supported;
        if (verdict == metrics::Verdict::kUnsupported) ++unsupported;
      }
      row["facts"] = facts[i].facts.size();
      row["supported"] = supported;
      row["unsupported"] = unsupported;
      if (facts[i].error) row["error"] = *facts[i].error;
      rows.push_back({i, std::move(row)});
    }
    for (const auto& [ext, scores] : externals) {
      if (ext.method && *ext.method != method) continue;
      auto it = scores.find(r.doc_id);
      if (it != scores.end()) rows.push_back({i, Row(r.doc_id, method, ext.name, it->second)});
    }
    const auto whitespace = static_cast<int64_t>(metrics::SummaryTokens(r.summary));
    const int64_t reported = r.summary_completion_tokens;
    // The e2e call also emits the highlight list, so its completion count
    // is not a summary length.
    const bool reported_is_summary = reported > 0 && r.method != pipeline::Method::kE2e;
    json row = Row(r.doc_id, method, "tokens",
                   static_cast<double>(reported_is_summary ? reported : whitespace));
    row["reported_tokens"] = reported > 0 ? json(reported) : json(nullptr);
    row["whitespace_tokens"] = whitespace;
    rows.push_back({i, std::move(row)});
  }

  // Records are already in (doc, method) order; rows of a record are in
  // metric order by construction apart from the warning row.
  std::stable_sort(rows.begin(), rows.end(), [](const Keyed& a, const Keyed& b) {
    if (a.record != b.record) return a.record < b.record;
    return report::LessMetric(a.row["metric"].get<std::string>(), b.row["metric"].get<std::string>());
  });
  std::string content;
  for (const auto& k : rows) content += k.row.dump() + "\n";
  WriteFileAtomic(run_dir / kMetricsFile, content);
  out.rows = rows.size();
  out.backend_calls = judge.backend_calls() - before;
  return out;
}

json BuildManifest(const config::ExperimentConfig& c, const RunSummary& summary,
                   const std::string& started, const std::string& finished,
                   size_t degenerate_documents) {
  auto records = ReadOutputs(fs::path(c.run_dir) / kOutputsFile);
  json counts = json::object();
  for (auto m : c.methods) {
    counts[std::string(pipeline::MethodName(m))] = {{"ok", 0}, {"failed", 0}, {"fallback", 0}};
  }
  for (const auto& r : records) {
    std::string name(pipeline::MethodName(r.method));
    if (!counts.contains(name)) continue;
    json& entry = counts[name];
    entry[r.ok() ? "ok" : "failed"] = entry[r.ok() ? "ok" : "failed"].get<int>() + 1;
    if (r.fallback_used) entry["fallback"] = entry["fallback"].get<int>() + 1;
  }
  return {{"version", HIGEN_VERSION},
          {"config", c.snapshot},
          {"started", started},
          {"finished", finished},
          {"corpus_size", summary.corpus_size},
          {"degenerate_documents", degenerate_documents},
          {"counts", counts},
          {"new_records", summary.new_records},
          {"resumed_records", summary.resumed_records},
          {"stopped_early", summary.stopped_early},
          {"backend_calls", summary.backend_calls},
          {"cache_hits", summary.cache_hits}};
}

}  // namespace higen::runner
