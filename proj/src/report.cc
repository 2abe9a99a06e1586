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

#include "higen/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "higen/error.h"
#include "higen/stats.h"
#include "json.hpp"

namespace higen::report {
namespace {

using json = nlohmann::json;

constexpr double kAlpha = 0.05;

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Shown as percentages for the bounded metrics, as-is otherwise.
std::string FormatMean(const std::string& metric, double mean) {
  if (metric == "rouge_l" || metric == "factscore") return Fixed(mean * 100.0, 2);
  if (metric == "tokens") return Fixed(mean, 1);
  return Fixed(mean, 2);
}

std::string JoinNames(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

}  // namespace

std::vector<MetricRow> LoadMetricRows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path.string());
  std::vector<MetricRow> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      MetricRow row{j.at("doc_id").get<std::string>(), j.at("method").get<std::string>(),
                    j.at("metric").get<std::string>(), std::nullopt};
      if (j.contains("value") && j["value"].is_number()) row.value = j["value"].get<double>();
      rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw DatasetError(path.string() + ": " + e.what(), line_no);
    }
  }
  return rows;
}

int MetricRank(const std::string& metric) {
  if (metric == "rouge_l") return 0;
  if (metric == "factscore") return 1;
  if (metric == "tokens") return 3;
  if (metric == "warning") return 4;
  return 2;
}

bool LessMetric(const std::string& a, const std::string& b) {
  int ra = MetricRank(a), rb = MetricRank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

std::string DisplayName(const std::string& metric) {
  if (metric == "rouge_l") return "R-L";
  if (metric == "factscore") return "FactScore";
  if (metric == "tokens") return "#Tokens";
  return metric;
}

ResultTable Aggregate(const std::vector<MetricRow>& rows, const std::vector<std::string>& methods,
                      const std::string& dataset, const std::string& model) {
  ResultTable table{dataset, model, methods, {}, {}};
  // metric -> method index -> doc -> value
  std::map<std::string, std::map<size_t, std::map<std::string, double>>> values;
  for (const auto& r : rows) {
    if (!r.value) continue;
    auto it = std::find(methods.begin(), methods.end(), r.method);
    if (it == methods.end()) continue;
    values[r.metric][static_cast<size_t>(it - methods.begin())][r.doc_id] = *r.value;
  }
  std::vector<std::string> metric_names;
  for (const auto& [metric, by_method] : values) metric_names.push_back(metric);
  std::sort(metric_names.begin(), metric_names.end(), LessMetric);

  for (const auto& metric : metric_names) {
    const auto& by_method = values[metric];
    Column col;
    col.metric = metric;
    col.ranked = metric != "tokens";
    col.cells.assign(methods.size(), std::nullopt);

    std::vector<size_t> present;
    std::vector<std::string> present_names;
    for (const auto& [m, docs] : by_method) {
      present.push_back(m);
      present_names.push_back(methods[m]);
    }
    std::set<std::string> joined;
    size_t largest = 0;
    for (const auto& [doc, v] : by_method.at(present.front())) joined.insert(doc);
    for (size_t m : present) {
      const auto& docs = by_method.at(m);
      largest = std::max(largest, docs.size());
      std::set<std::string> keep;
      for (const auto& d : joined) {
        if (docs.contains(d)) keep.insert(d);
      }
      joined.swap(keep);
    }
    if (joined.empty()) {
      throw DomainError("metric " + metric + ": no document is scored for every method (" +
                        JoinNames(present_names) + ")");
    }
    if (joined.size() < 2) {
      throw DomainError("metric " + metric + ": fewer than two joined documents for " +
                        JoinNames(present_names));
    }
    col.joined_docs = joined.size();
    if (joined.size() < largest) {
      table.footnotes.push_back(DisplayName(metric) + ": means over the " +
                                std::to_string(joined.size()) +
                                " documents scored for every method.");
    }

    // Doc-id order for the paired vectors (std::set is sorted).
    std::map<size_t, std::vector<double>> paired;
    for (size_t m : present) {
      auto& v = paired[m];
      double sum = 0.0;
      for (const auto& d : joined) {
        v.push_back(by_method.at(m).at(d));
        sum += v.back();
      }
      col.cells[m] = Cell{sum / static_cast<double>(v.size()), v.size(), false, false};
    }

    if (col.ranked) {
      // Iterating in method order makes strict > keep the earlier method on ties.
      std::optional<size_t> best, next;
      for (size_t m : present) {
        if (!best || col.cells[m]->mean > col.cells[*best]->mean) best = m;
      }
      for (size_t m : present) {
        if (m == *best) continue;
        if (!next || col.cells[m]->mean > col.cells[*next]->mean) next = m;
      }
      col.cells[*best]->is_best = true;
      std::vector<std::string> tied;
      for (size_t m : present) {
        if (m != *best && col.cells[m]->mean == col.cells[*best]->mean) tied.push_back(methods[m]);
      }
      if (!tied.empty()) {
        table.footnotes.push_back(DisplayName(metric) + ": " + methods[*best] + " ties with " +
                                  JoinNames(tied) + "; the earlier method is marked best.");
      }
      if (next) {
        auto t = stats::PairedTTest(paired[*best], paired[*next]);
        col.p_value = t.p;
        col.cells[*next]->is_sig = t.p < kAlpha;
      }
    }
    table.columns.push_back(std::move(col));
  }
  return table;
}

std::string EmitMarkdown(const ResultTable& table) {
  std::string out = "| Method |";
  std::string sep = "|---|";
  for (const auto& col : table.columns) {
    out += " " + DisplayName(col.metric) + " |";
    sep += "---|";
  }
  out += "\n" + sep + "\n";
  for (size_t m = 0; m < table.methods.size(); ++m) {
    out += "| " + table.methods[m] + " |";
    for (const auto& col : table.columns) {
      const auto& cell = col.cells[m];
      if (!cell) {
        out += " - |";
        continue;
      }
      std::string v = FormatMean(col.metric, cell->mean);
      if (cell->is_best) v = "**" + v + "**";
      if (cell->is_sig) v += "*";
      out += " " + v + " |";
    }
    out += "\n";
  }
  if (!table.footnotes.empty()) {
    out += "\n";
    for (const auto& f : table.footnotes) out += "- " + f + "\n";
  }
  return out;
}

std::string EmitCsv(const ResultTable& table) {
  std::string out = "method,metric,mean,n,is_best,is_sig\n";
  for (const auto& col : table.columns) {
    for (size_t m = 0; m < table.methods.size(); ++m) {
      const auto& cell = col.cells[m];
      if (!cell) continue;
      char mean[64];
      std::snprintf(mean, sizeof(mean), "%.10g", cell->mean);
      out += table.methods[m] + "," + col.metric + "," + mean + "," + std::to_string(cell->n) +
             "," + (cell->is_best ? "true" : "false") + "," + (cell->is_sig ? "true" : "false") +
             "\n";
    }
  }
  return out;
}

void WriteReport(const ResultTable& table, const std::filesystem::path& run_dir) {
  for (const auto& [name, content] :
       {std::pair{"report.md", EmitMarkdown(table)}, std::pair{"report.csv", EmitCsv(table)}}) {
    std::ofstream out(run_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write " + (run_dir / name).string());
    out << content;
  }
}

}  // namespace higen::report
