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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flminer/formula_miner.hpp"
#include "flminer/ingest.hpp"
#include "flminer/temporal_miner.hpp"

namespace flminer::cli {

struct Paths {
  std::filesystem::path corpus = "data/corpus.jsonl";
  std::filesystem::path tree;    // empty: built-in tree
  std::filesystem::path schema;  // empty: built-in schema
  std::filesystem::path keywords = "data/keywords.txt";
  std::filesystem::path incidents = "data/incidents.csv";
  std::filesystem::path booleanized = "data/booleanized.csv";
  std::filesystem::path traces = "data/traces.jsonl";
  std::filesystem::path reports = "reports";
};

struct TextModelSettings {
  std::string endpoint;  // empty: deterministic stub
  std::string credential_env;
  int timeout_seconds = 30;
};

struct NewsSearchSettings {
  std::string endpoint = "http://127.0.0.1:8090";
  std::string credential_env;
  double rate_limit_rps = 5.0;
  std::size_t max_retries = 3;
  std::size_t backoff_ms = 200;
  std::size_t page_size = 10;
  std::size_t max_results = 100;
  std::string date_from;
  std::string date_to;
};

struct KeywordSettings {
  std::string seed_topic = "forced labor in supply chains";
  std::size_t count = 8;
};

struct QtreeSettings {
  double threshold = 0.5;
  std::string provider = "keyword";  // keyword | text_model
};

struct MiningSettings {
  EnumerationConfig enumeration;
  std::size_t top_k = 20;
};

struct TemporalSettings {
  TemporalConfig config;
  std::size_t top_k = 20;
};

struct ServiceSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::string annotator = "annotator";
};

struct FakeNewsSettings {
  std::string host = "127.0.0.1";
  int port = 8090;
  std::size_t size = 40;
  std::string token_env;  // when set, the server demands this bearer token
};

struct Config {
  std::uint64_t seed = 7;
  std::string fixed_time;  // when set, every timestamp written uses it
  std::size_t workers = 1;
  Paths paths;
  TextModelSettings text_model;
  NewsSearchSettings news_search;
  KeywordSettings keywords;
  QtreeSettings qtree;
  MiningSettings mining;
  TemporalSettings temporal;
  ServiceSettings service;
  FakeNewsSettings fake_news;
};

/// The full configuration with every default filled in.
nlohmann::json default_config_json();

/// Defaults, then the file (when given), then `key.path=value` overrides.
/// Values are read as JSON and fall back to plain strings. Unknown keys and
/// out-of-range values throw InvalidConfig.
Config load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides);

Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& c);

/// Throws InvalidConfig naming the first path that does not exist.
void require_files(const std::vector<std::filesystem::path>& files);

}  // namespace flminer::cli
