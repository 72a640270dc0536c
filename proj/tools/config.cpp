// Copyright 2026 The flminer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "flminer/error.hpp"

namespace flminer::cli {
namespace {

using nlohmann::json;

json operators_json(const OperatorSet& o) {
  return {{"negation", o.negation},
          {"conjunction", o.conjunction},
          {"disjunction", o.disjunction},
          {"implication", o.implication}};
}

OperatorSet operators_from(const json& j) {
  return {j.at("negation").get<bool>(), j.at("conjunction").get<bool>(),
          j.at("disjunction").get<bool>(), j.at("implication").get<bool>()};
}

// Recursively rejects keys the defaults do not know, then overlays.
void overlay(json& base, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw Error(ErrorCode::kInvalidConfig, where + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw Error(ErrorCode::kInvalidConfig, "unknown config key " + path);
    if (base[key].is_object()) {
      overlay(base[key], value, path);
    } else {
      base[key] = value;
    }
  }
}

}  // namespace

json config_to_json(const Config& c) {
  const auto& p = c.paths;
  const auto& e = c.mining.enumeration;
  const auto& t = c.temporal.config;
  return {
      {"seed", c.seed},
      {"fixed_time", c.fixed_time},
      {"workers", c.workers},
      {"paths",
       {{"corpus", p.corpus.string()},
        {"tree", p.tree.string()},
        {"schema", p.schema.string()},
        {"keywords", p.keywords.string()},
        {"incidents", p.incidents.string()},
        {"booleanized", p.booleanized.string()},
        {"traces", p.traces.string()},
        {"reports", p.reports.string()}}},
      {"text_model",
       {{"endpoint", c.text_model.endpoint},
        {"credential_env", c.text_model.credential_env},
        {"timeout_seconds", c.text_model.timeout_seconds}}},
      {"news_search",
       {{"endpoint", c.news_search.endpoint},
        {"credential_env", c.news_search.credential_env},
        {"rate_limit_rps", c.news_search.rate_limit_rps},
        {"max_retries", c.news_search.max_retries},
        {"backoff_ms", c.news_search.backoff_ms},
        {"page_size", c.news_search.page_size},
        {"max_results", c.news_search.max_results},
        {"date_from", c.news_search.date_from},
        {"date_to", c.news_search.date_to}}},
      {"keywords", {{"seed_topic", c.keywords.seed_topic}, {"count", c.keywords.count}}},
      {"qtree", {{"threshold", c.qtree.threshold}, {"provider", c.qtree.provider}}},
      {"mining",
       {{"variables", e.variables},
        {"max_size", e.max_size},
        {"max_vars", e.max_vars_per_formula},
        {"operators", operators_json(e.operators)},
        {"top_k", c.mining.top_k}}},
      {"temporal",
       {{"variables", t.variables},
        {"max_size", t.max_size},
        {"max_depth", t.max_temporal_depth},
        {"max_vars", t.max_vars_per_formula},
        {"lower_bounds", t.lower_bounds},
        {"upper_bounds", t.upper_bounds},
        {"infer_bounds", t.infer_bounds},
        {"use_finally", t.use_finally},
        {"use_globally", t.use_globally},
        {"operators", operators_json(t.operators)},
        {"dedup_equivalent", t.dedup_equivalent},
        {"top_k", c.temporal.top_k}}},
      {"service",
       {{"host", c.service.host},
        {"port", c.service.port},
        {"static_dir", c.service.static_dir},
        {"annotator", c.service.annotator}}},
      {"fake_news",
       {{"host", c.fake_news.host},
        {"port", c.fake_news.port},
        {"size", c.fake_news.size},
        {"token_env", c.fake_news.token_env}}},
  };
}

json default_config_json() { return config_to_json(Config{}); }

Config config_from_json(const json& j) {
  Config c;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.fixed_time = j.at("fixed_time").get<std::string>();
    c.workers = j.at("workers").get<std::size_t>();
    const auto& p = j.at("paths");
    c.paths.corpus = p.at("corpus").get<std::string>();
    c.paths.tree = p.at("tree").get<std::string>();
    c.paths.schema = p.at("schema").get<std::string>();
    c.paths.keywords = p.at("keywords").get<std::string>();
    c.paths.incidents = p.at("incidents").get<std::string>();
    c.paths.booleanized = p.at("booleanized").get<std::string>();
    c.paths.traces = p.at("traces").get<std::string>();
    c.paths.reports = p.at("reports").get<std::string>();
    const auto& tm = j.at("text_model");
    c.text_model.endpoint = tm.at("endpoint").get<std::string>();
    c.text_model.credential_env = tm.at("credential_env").get<std::string>();
    c.text_model.timeout_seconds = tm.at("timeout_seconds").get<int>();
    const auto& ns = j.at("news_search");
    c.news_search.endpoint = ns.at("endpoint").get<std::string>();
    c.news_search.credential_env = ns.at("credential_env").get<std::string>();
    c.news_search.rate_limit_rps = ns.at("rate_limit_rps").get<double>();
    c.news_search.max_retries = ns.at("max_retries").get<std::size_t>();
    c.news_search.backoff_ms = ns.at("backoff_ms").get<std::size_t>();
    c.news_search.page_size = ns.at("page_size").get<std::size_t>();
    c.news_search.max_results = ns.at("max_results").get<std::size_t>();
    c.news_search.date_from = ns.at("date_from").get<std::string>();
    c.news_search.date_to = ns.at("date_to").get<std::string>();
    c.keywords.seed_topic = j.at("keywords").at("seed_topic").get<std::string>();
    c.keywords.count = j.at("keywords").at("count").get<std::size_t>();
    c.qtree.threshold = j.at("qtree").at("threshold").get<double>();
    c.qtree.provider = j.at("qtree").at("provider").get<std::string>();
    const auto& m = j.at("mining");
    c.mining.enumeration.variables = m.at("variables").get<std::vector<std::string>>();
    c.mining.enumeration.max_size = m.at("max_size").get<std::size_t>();
    c.mining.enumeration.max_vars_per_formula = m.at("max_vars").get<std::size_t>();
    c.mining.enumeration.operators = operators_from(m.at("operators"));
    c.mining.top_k = m.at("top_k").get<std::size_t>();
    const auto& t = j.at("temporal");
    auto& tc = c.temporal.config;
    tc.variables = t.at("variables").get<std::vector<std::string>>();
    tc.max_size = t.at("max_size").get<std::size_t>();
    tc.max_temporal_depth = t.at("max_depth").get<std::size_t>();
    tc.max_vars_per_formula = t.at("max_vars").get<std::size_t>();
    tc.lower_bounds = t.at("lower_bounds").get<std::vector<std::size_t>>();
    tc.upper_bounds = t.at("upper_bounds").get<std::vector<std::size_t>>();
    tc.infer_bounds = t.at("infer_bounds").get<bool>();
    tc.use_finally = t.at("use_finally").get<bool>();
    tc.use_globally = t.at("use_globally").get<bool>();
    tc.operators = operators_from(t.at("operators"));
    tc.dedup_equivalent = t.at("dedup_equivalent").get<bool>();
    c.temporal.top_k = t.at("top_k").get<std::size_t>();
    const auto& s = j.at("service");
    c.service.host = s.at("host").get<std::string>();
    c.service.port = s.at("port").get<int>();
    c.service.static_dir = s.at("static_dir").get<std::string>();
    c.service.annotator = s.at("annotator").get<std::string>();
    const auto& f = j.at("fake_news");
    c.fake_news.host = f.at("host").get<std::string>();
    c.fake_news.port = f.at("port").get<int>();
    c.fake_news.size = f.at("size").get<std::size_t>();
    c.fake_news.token_env = f.at("token_env").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }

  if (!(c.qtree.threshold >= 0.0 && c.qtree.threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("qtree.threshold must lie in [0,1], got {}", c.qtree.threshold));
  }
  if (c.qtree.provider != "keyword" && c.qtree.provider != "text_model") {
    throw Error(ErrorCode::kInvalidConfig, "qtree.provider must be keyword or text_model");
  }
  if (c.qtree.provider == "text_model" && c.text_model.endpoint.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "qtree.provider text_model needs text_model.endpoint");
  }
  if (c.workers == 0) throw Error(ErrorCode::kInvalidConfig, "workers must be >= 1");
  if (c.mining.top_k == 0 || c.temporal.top_k == 0) {
    throw Error(ErrorCode::kInvalidConfig, "top_k must be >= 1");
  }
  if (c.keywords.count == 0) throw Error(ErrorCode::kInvalidConfig, "keywords.count must be >= 1");
  if (c.news_search.rate_limit_rps < 0) {
    throw Error(ErrorCode::kInvalidConfig, "news_search.rate_limit_rps must be >= 0");
  }
  return c;
}

Config load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides) {
  json j = default_config_json();
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    json patch;
    try {
      patch = json::parse(buf.str());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidConfig, file.string() + ": " + e.what());
    }
    overlay(j, patch, "");
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kInvalidConfig, "override must look like key.path=value: " + o);
    }
    const std::string key = o.substr(0, eq);
    const std::string raw = o.substr(eq + 1);
    std::string pointer;
    for (std::size_t start = 0; start <= key.size();) {
      auto dot = key.find('.', start);
      if (dot == std::string::npos) dot = key.size();
      pointer += "/" + key.substr(start, dot - start);
      start = dot + 1;
    }
    const json::json_pointer ptr(pointer);
    if (!j.contains(ptr) || j[ptr].is_object()) {
      throw Error(ErrorCode::kInvalidConfig, "unknown config key " + key);
    }
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::exception&) {
      value = raw;
    }
    if (j[ptr].is_string() && !value.is_string()) value = raw;
    j[ptr] = value;
  }
  return config_from_json(j);
}

void require_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) {
    if (!std::filesystem::exists(f)) {
      throw Error(ErrorCode::kInvalidConfig, "required file not found: " + f.string());
    }
  }
}

}  // namespace flminer::cli
