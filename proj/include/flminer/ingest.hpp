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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "flminer/article.hpp"
#include "flminer/feature_model.hpp"
#include "flminer/providers.hpp"

namespace flminer {

inline const std::vector<std::string> kSeedTerms = {"forced labor", "supply chain"};

struct KeywordQuery {
  std::vector<std::string> terms = kSeedTerms;
  std::string date_from;  // YYYY-MM-DD, empty = open
  std::string date_to;
  std::size_t page_size = 10;
  std::size_t max_results = 100;
};

void validate_query(const KeywordQuery& query);

/// The prompt sent to the text model; `{topic}` is replaced by the seed topic.
inline constexpr std::string_view kKeywordPromptTemplate =
    "You are helping search news databases for reporting on {topic}.\n"
    "List search keyword phrases that would find relevant news articles.\n"
    "Write one phrase per line with no numbering, bullets or commentary.\n";

std::string keyword_prompt(std::string_view seed_topic);

/// Seed terms first, then the model's phrases (one per line, lowercased,
/// list markers stripped), deduplicated and truncated to n.
std::vector<std::string> generate_keywords(TextModelProvider& provider,
                                           std::string_view seed_topic, std::size_t n);

struct RawArticle {
  std::string title;
  std::string url;
  std::string source;
  std::string date;
  std::string snippet;
};

struct SearchPage {
  std::size_t total_count = 0;
  std::vector<RawArticle> items;
};

/// `page` is 1-based.
class NewsSearchClient {
 public:
  virtual ~NewsSearchClient() = default;
  virtual SearchPage search(const KeywordQuery& query, std::size_t page) = 0;
};

/// Minimum spacing between requests; shared by every client that holds it.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);
  void acquire();

 private:
  std::mutex mutex_;
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
};

struct RetryPolicy {
  std::size_t max_retries = 3;
  std::chrono::milliseconds backoff{200};  // doubled after every retry
};

/// POST {base_url}/search with {"terms", "date_from", "date_to", "page",
/// "page_size"}; expects {"total_count", "items": [{"title", "url",
/// "source", "date", "snippet"}]}. Retries 429 and 5xx responses.
class HttpNewsSearchClient : public NewsSearchClient {
 public:
  HttpNewsSearchClient(HttpEndpoint endpoint, std::shared_ptr<RateLimiter> limiter,
                       RetryPolicy retry = {});
  SearchPage search(const KeywordQuery& query, std::size_t page) override;

 private:
  HttpEndpoint endpoint_;
  std::shared_ptr<RateLimiter> limiter_;
  RetryPolicy retry_;
};

SearchPage parse_search_page(std::string_view body, std::size_t page);
std::string search_request_json(const KeywordQuery& query, std::size_t page);

using Clock = std::function<std::string()>;

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_now();

struct FetchResult {
  std::vector<ArticleRecord> articles;
  std::vector<std::string> warnings;
  std::size_t requests = 0;
};

/// Pages through results until max_results or exhaustion. A failure on the
/// first page throws; later failures end pagination with a warning.
FetchResult fetch_articles(NewsSearchClient& client, const KeywordQuery& query,
                           const Clock& clock = utc_now);

ArticleRecord to_article(const RawArticle& raw, const KeywordQuery& query,
                         const std::string& retrieved_at);

/// Keeps the first record per article_id, order preserved.
std::vector<ArticleRecord> dedup_corpus(const std::vector<ArticleRecord>& records);

/// Boolean features answered through `provider` (node id = feature key);
/// every other feature is missing.
IncidentRecord extract_features(AnswerProvider& provider, const ArticleRecord& article,
                                const FeatureSchema& schema, Label label);

/// Deterministic synthetic news corpus served over the search contract.
struct FakeCorpusOptions {
  std::uint64_t seed = 7;
  std::size_t size = 40;
};

std::vector<RawArticle> generate_fake_corpus(const FakeCorpusOptions& options);

/// In-process HTTP server implementing the news-search contract over a fixed
/// corpus. A term matches an article when it occurs in title or snippet
/// (case-insensitive); an article matches the query when any term does.
class FakeNewsServer {
 public:
  explicit FakeNewsServer(std::vector<RawArticle> corpus, std::string required_token = {});
  ~FakeNewsServer();
  FakeNewsServer(const FakeNewsServer&) = delete;
  FakeNewsServer& operator=(const FakeNewsServer&) = delete;

  /// Binds to `port` (0 = any free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  /// Blocks serving on the calling thread.
  void listen(const std::string& host, int port);

  std::size_t requests() const;
  /// Makes request number `n` (1-based, counting every request) fail with `status`.
  void fail_request(std::size_t n, int status);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace flminer
