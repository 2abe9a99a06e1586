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

#include "higen/config.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "higen/error.h"

namespace higen::config {
namespace {

using json = nlohmann::json;

template <typename T>
T Get(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + where + key + "' has the wrong type");
  }
}

const json& Section(const json& obj, const std::string& key) {
  static const json kEmpty = json::object();
  if (!obj.contains(key) || obj[key].is_null()) return kEmpty;
  if (!obj[key].is_object()) throw ConfigError("field '" + key + "' must be an object");
  return obj[key];
}

std::string Resolve(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path.lexically_normal().string();
  return (base / path).lexically_normal().string();
}

void RejectUnknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown field '" + where + key + "'");
  }
}

}  // namespace

ExperimentConfig FromJson(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RejectUnknown(j,
                {"dataset", "methods", "model", "judge_model", "k", "temperature", "max_tokens",
                 "align_threshold", "endpoint", "concurrency", "cache_dir", "run_dir", "seed",
                 "attribution", "lexrank", "metrics", "debug_dumps"},
                "");
  ExperimentConfig c;

  const json& ds = Section(j, "dataset");
  c.dataset.path = Resolve(Get<std::string>(ds, "path", "dataset.", ""), base_dir);
  if (c.dataset.path.empty()) throw ConfigError("missing required field 'dataset.path'");
  try {
    c.dataset.schema = corpus::ParseSchema(Get<std::string>(ds, "schema", "dataset.", "scrolls_govreport"));
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("dataset.schema: ") + e.what());
  }
  if (ds.contains("limit") && !ds["limit"].is_null()) {
    int64_t limit = Get<int64_t>(ds, "limit", "dataset.", 0);
    if (limit < 0) throw ConfigError("dataset.limit must be >= 0");
    c.dataset.limit = static_cast<size_t>(limit);
  }
  if (ds.contains("shuffle_seed") && !ds["shuffle_seed"].is_null()) {
    c.dataset.shuffle_seed = Get<uint64_t>(ds, "shuffle_seed", "dataset.", 0);
  }
  c.dataset.name = Get<std::string>(ds, "name", "dataset.",
                                    std::filesystem::path(c.dataset.path).stem().string());
  const json& fm = Section(ds, "fields");
  c.dataset.fields.id_field = Get<std::string>(fm, "id_field", "dataset.fields.", "id");
  c.dataset.fields.input_field = Get<std::string>(fm, "input_field", "dataset.fields.", "input");
  c.dataset.fields.output_field = Get<std::string>(fm, "output_field", "dataset.fields.", "output");
  if (fm.contains("query_field")) c.dataset.fields.query_field = Get<std::string>(fm, "query_field", "dataset.fields.", "");
  try {
    c.dataset.fields.kind = corpus::ParseKind(Get<std::string>(fm, "kind", "dataset.fields.", "prose"));
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("dataset.fields.kind: ") + e.what());
  }

  if (!j.contains("methods")) throw ConfigError("missing required field 'methods'");
  if (!j["methods"].is_array() || j["methods"].empty()) {
    throw ConfigError("field 'methods' must be a non-empty list");
  }
  for (const auto& m : j["methods"]) {
    if (!m.is_string()) throw ConfigError("field 'methods' must contain strings");
    try {
      auto method = pipeline::ParseMethod(m.get<std::string>());
      if (std::find(c.methods.begin(), c.methods.end(), method) != c.methods.end()) {
        throw ConfigError("duplicate method '" + m.get<std::string>() + "' in 'methods'");
      }
      c.methods.push_back(method);
    } catch (const ArgumentError&) {
      throw ConfigError("unknown method '" + m.get<std::string>() + "' in 'methods'");
    }
  }

  c.model = Get<std::string>(j, "model", "", "");
  if (c.model.empty()) throw ConfigError("missing required field 'model'");
  c.judge_model = Get<std::string>(j, "judge_model", "", c.model);
  int64_t k = Get<int64_t>(j, "k", "", 30);
  if (k < 1) throw ConfigError("field 'k' must be >= 1");
  c.k = static_cast<size_t>(k);
  c.temperature = Get<double>(j, "temperature", "", 0.0);
  if (c.temperature < 0) throw ConfigError("field 'temperature' must be >= 0");
  c.max_tokens = Get<int64_t>(j, "max_tokens", "", 0);
  if (c.max_tokens < 0) throw ConfigError("field 'max_tokens' must be >= 0");
  c.align_threshold = Get<double>(j, "align_threshold", "", 0.6);
  if (!(c.align_threshold > 0 && c.align_threshold <= 1)) {
    throw ConfigError("field 'align_threshold' must be in (0, 1]");
  }

  const json& ep = Section(j, "endpoint");
  c.endpoint.backend = Get<std::string>(ep, "backend", "endpoint.", "openai");
  if (c.endpoint.backend != "openai" && c.endpoint.backend != "mock") {
    throw ConfigError("endpoint.backend must be 'openai' or 'mock'");
  }
  c.endpoint.base_url = Get<std::string>(ep, "base_url", "endpoint.", "");
  c.endpoint.auth_env = Get<std::string>(ep, "auth_env", "endpoint.", "HIGEN_API_KEY");
  c.endpoint.timeout_s = Get<int>(ep, "timeout_s", "endpoint.", 600);
  c.endpoint.max_attempts = Get<int>(ep, "max_attempts", "endpoint.", 5);
  c.endpoint.base_delay_ms = Get<int64_t>(ep, "base_delay_ms", "endpoint.", 1000);
  if (c.endpoint.max_attempts < 1) throw ConfigError("endpoint.max_attempts must be >= 1");

  c.concurrency = Get<int>(j, "concurrency", "", 4);
  if (c.concurrency < 1) throw ConfigError("field 'concurrency' must be >= 1");
  c.run_dir = Resolve(Get<std::string>(j, "run_dir", "", "runs/default"), base_dir);
  c.cache_dir = Resolve(Get<std::string>(j, "cache_dir", "", ""), base_dir);
  if (c.cache_dir.empty()) {
    c.cache_dir = (std::filesystem::path(c.run_dir) / "cache").string();
    c.cache_follows_run_dir = true;
  }
  c.seed = Get<uint64_t>(j, "seed", "", 0);

  const json& at = Section(j, "attribution");
  int64_t m = Get<int64_t>(at, "m", "attribution.", 64);
  if (m < 2) throw ConfigError("attribution.m must be >= 2");
  c.attribution.num_ablations = static_cast<size_t>(m);
  c.attribution.keep_prob = Get<double>(at, "keep_prob", "attribution.", 0.5);
  if (!(c.attribution.keep_prob > 0 && c.attribution.keep_prob < 1)) {
    throw ConfigError("attribution.keep_prob must be in (0, 1)");
  }
  c.attribution.lambda_frac = Get<double>(at, "lambda_frac", "attribution.", 0.01);
  if (c.attribution.lambda_frac < 0) throw ConfigError("attribution.lambda_frac must be >= 0");
  c.attribution.seed = c.seed;

  const json& lr = Section(j, "lexrank");
  c.lexrank.threshold = Get<double>(lr, "threshold", "lexrank.", 0.1);
  c.lexrank.damping = Get<double>(lr, "damping", "lexrank.", 0.85);
  if (!(c.lexrank.damping > 0 && c.lexrank.damping < 1)) throw ConfigError("lexrank.damping must be in (0, 1)");
  c.lexrank.tol = Get<double>(lr, "tol", "lexrank.", 1e-8);
  if (!(c.lexrank.tol > 0)) throw ConfigError("lexrank.tol must be > 0");
  c.lexrank.max_iter = Get<size_t>(lr, "max_iter", "lexrank.", 200);

  const json& mt = Section(j, "metrics");
  c.metrics.enable_factscore = Get<bool>(mt, "enable_factscore", "metrics.", false);
  if (mt.contains("external_scores")) {
    if (!mt["external_scores"].is_array()) throw ConfigError("metrics.external_scores must be a list");
    for (const auto& e : mt["external_scores"]) {
      ExternalScores ext;
      ext.name = Get<std::string>(e, "name", "metrics.external_scores.", "");
      ext.path = Resolve(Get<std::string>(e, "path", "metrics.external_scores.", ""), base_dir);
      if (ext.name.empty() || ext.path.empty()) {
        throw ConfigError("metrics.external_scores entries need 'name' and 'path'");
      }
      if (e.contains("method")) {
        ext.method = Get<std::string>(e, "method", "metrics.external_scores.", "");
        try {
          pipeline::ParseMethod(*ext.method);
        } catch (const ArgumentError&) {
          throw ConfigError("unknown method '" + *ext.method + "' in metrics.external_scores");
        }
      }
      c.metrics.external_scores.push_back(std::move(ext));
    }
  }
  c.debug_dumps = Get<bool>(j, "debug_dumps", "", false);
  c.snapshot = ToJson(c);
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return FromJson(j, std::filesystem::absolute(path).parent_path());
}

json ToJson(const ExperimentConfig& c) {
  json methods = json::array();
  for (auto m : c.methods) methods.push_back(pipeline::MethodName(m));
  json external = json::array();
  for (const auto& e : c.metrics.external_scores) {
    json x = {{"name", e.name}, {"path", e.path}};
    if (e.method) x["method"] = *e.method;
    external.push_back(x);
  }
  json fields = {{"id_field", c.dataset.fields.id_field},
                 {"input_field", c.dataset.fields.input_field},
                 {"output_field", c.dataset.fields.output_field},
                 {"kind", corpus::KindName(c.dataset.fields.kind)}};
  if (c.dataset.fields.query_field) fields["query_field"] = *c.dataset.fields.query_field;
  return {
      {"dataset",
       {{"path", c.dataset.path},
        {"schema", corpus::SchemaName(c.dataset.schema)},
        {"limit", c.dataset.limit ? json(*c.dataset.limit) : json(nullptr)},
        {"shuffle_seed", c.dataset.shuffle_seed ? json(*c.dataset.shuffle_seed) : json(nullptr)},
        {"name", c.dataset.name},
        {"fields", fields}}},
      {"methods", methods},
      {"model", c.model},
      {"judge_model", c.judge_model},
      {"k", c.k},
      {"temperature", c.temperature},
      {"max_tokens", c.max_tokens},
      {"align_threshold", c.align_threshold},
      {"endpoint",
       {{"backend", c.endpoint.backend},
        {"base_url", c.endpoint.base_url},
        {"auth_env", c.endpoint.auth_env},
        {"timeout_s", c.endpoint.timeout_s},
        {"max_attempts", c.endpoint.max_attempts},
        {"base_delay_ms", c.endpoint.base_delay_ms}}},
      {"concurrency", c.concurrency},
      {"cache_dir", c.cache_dir},
      {"run_dir", c.run_dir},
      {"seed", c.seed},
      {"attribution",
       {{"m", c.attribution.num_ablations},
        {"keep_prob", c.attribution.keep_prob},
        {"lambda_frac", c.attribution.lambda_frac}}},
      {"lexrank",
       {{"threshold", c.lexrank.threshold},
        {"damping", c.lexrank.damping},
        {"tol", c.lexrank.tol},
        {"max_iter", c.lexrank.max_iter}}},
      {"metrics", {{"enable_factscore", c.metrics.enable_factscore}, {"external_scores", external}}},
      {"debug_dumps", c.debug_dumps},
  };
}

void SetRunDir(ExperimentConfig& c, const std::string& run_dir) {
  c.run_dir = std::filesystem::path(run_dir).lexically_normal().string();
  if (c.cache_follows_run_dir) c.cache_dir = (std::filesystem::path(c.run_dir) / "cache").string();
  c.snapshot = ToJson(c);
}

pipeline::Params PipelineParams(const ExperimentConfig& c) {
  pipeline::Params p;
  p.k = c.k;
  p.align_threshold = c.align_threshold;
  p.max_tokens = c.max_tokens;
  p.temperature = c.temperature;
  p.seed = static_cast<int64_t>(c.seed);
  p.lexrank = c.lexrank;
  p.attribution = c.attribution;
  if (c.debug_dumps) p.attribution_dump_dir = (std::filesystem::path(c.run_dir) / "debug").string();
  return p;
}

}  // namespace higen::config
