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

#ifndef HIGEN_REPORT_H_
#define HIGEN_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace higen::report {

// One metrics.jsonl row. Rows without a value (warnings, absent scores)
// carry nullopt and never enter an aggregate.
struct MetricRow {
  std::string doc_id;
  std::string method;
  std::string metric;
  std::optional<double> value;
};

std::vector<MetricRow> LoadMetricRows(const std::filesystem::path& path);

// Column position: rouge_l, factscore, external metrics alphabetically,
// tokens last.
int MetricRank(const std::string& metric);
std::string DisplayName(const std::string& metric);
bool LessMetric(const std::string& a, const std::string& b);

struct Cell {
  double mean = 0.0;
  size_t n = 0;
  bool is_best = false;
  bool is_sig = false;
};

struct Column {
  std::string metric;
  // False for the length column: reported, never bolded or starred.
  bool ranked = true;
  // Parallel to ResultTable::methods; empty for a method without values.
  std::vector<std::optional<Cell>> cells;
  size_t joined_docs = 0;
  std::optional<double> p_value;  // best vs next best
};

struct ResultTable {
  std::string dataset;
  std::string model;
  std::vector<std::string> methods;
  std::vector<Column> columns;
  std::vector<std::string> footnotes;
};

// Per metric: inner join on doc_id across the methods that have values,
// means over the joined set, best = largest mean (ties to the earlier
// method, footnoted), and the next best is starred iff the paired t-test
// of best against it gives p < 0.05. Throws DomainError on an empty join or
// fewer than two joined documents, naming the methods.
ResultTable Aggregate(const std::vector<MetricRow>& rows, const std::vector<std::string>& methods,
                      const std::string& dataset = {}, const std::string& model = {});

std::string EmitMarkdown(const ResultTable& table);
// Long format: method,metric,mean,n,is_best,is_sig.
std::string EmitCsv(const ResultTable& table);

// Writes report.md and report.csv into `run_dir`.
void WriteReport(const ResultTable& table, const std::filesystem::path& run_dir);

}  // namespace higen::report

#endif  // HIGEN_REPORT_H_
