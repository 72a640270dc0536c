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

#include "flminer/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <cctype>
#include <ctime>
#include <random>
#include <set>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "flminer/error.hpp"
#include "http_util.hpp"

namespace flminer {
namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// "- x", "* x", "• x", "3. x", "3) x" -> "x"
std::string strip_list_marker(std::string s) {
  static const std::string kBullet = "\xE2\x80\xA2";
  if (s.starts_with(kBullet)) return trim(s.substr(kBullet.size()));
  if (!s.empty() && (s[0] == '-' || s[0] == '*')) return trim(s.substr(1));
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) return trim(s.substr(i + 1));
  return s;
}

std::string json_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return {};
  return j[key].get<std::string>();
}

}  // namespace

void validate_query(const KeywordQuery& q) {
  if (q.terms.empty()) throw Error(ErrorCode::kInvalidConfig, "query needs at least one term");
  if (q.page_size == 0) throw Error(ErrorCode::kInvalidConfig, "page_size must be >= 1");
  if (q.max_results == 0) throw Error(ErrorCode::kInvalidConfig, "max_results must be >= 1");
  for (const auto* d : {&q.date_from, &q.date_to}) {
    if (!d->empty() && !parse_date(*d)) {
      throw Error(ErrorCode::kInvalidConfig, "date filter must be YYYY-MM-DD: " + *d);
    }
  }
}

std::string keyword_prompt(std::string_view seed_topic) {
  std::string prompt(kKeywordPromptTemplate);
  const std::string marker = "{topic}";
  prompt.replace(prompt.find(marker), marker.size(), seed_topic);
  return prompt;
}

std::vector<std::string> generate_keywords(TextModelProvider& provider,
                                           std::string_view seed_topic, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidConfig, "keyword count must be >= 1");
  std::string completion;
  try {
    completion = provider.complete(keyword_prompt(seed_topic));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kProviderFailure, e.what());
  }

  std::vector<std::string> phrases;
  std::size_t start = 0;
  while (start <= completion.size()) {
    auto end = completion.find('\n', start);
    if (end == std::string::npos) end = completion.size();
    std::string line = lower(strip_list_marker(trim(completion.substr(start, end - start))));
    if (!line.empty()) phrases.push_back(std::move(line));
    start = end + 1;
  }
  if (phrases.empty()) throw Error(ErrorCode::kEmptyCompletion, "text model returned no phrases");

  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& list : {kSeedTerms, phrases}) {
    for (const auto& p : list) {
      if (out.size() >= n) return out;
      if (seen.insert(p).second) out.push_back(p);
    }
  }
  return out;
}

RateLimiter::RateLimiter(double requests_per_second)
    : interval_(requests_per_second > 0
                    ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(1.0 / requests_per_second))
                    : std::chrono::steady_clock::duration::zero()),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

HttpNewsSearchClient::HttpNewsSearchClient(HttpEndpoint endpoint,
                                           std::shared_ptr<RateLimiter> limiter,
                                           RetryPolicy retry)
    : endpoint_(std::move(endpoint)), limiter_(std::move(limiter)), retry_(retry) {}

std::string search_request_json(const KeywordQuery& query, std::size_t page) {
  return json{{"terms", query.terms},       {"date_from", query.date_from},
              {"date_to", query.date_to},   {"page", page},
              {"page_size", query.page_size}}
      .dump();
}

SearchPage parse_search_page(std::string_view body, std::size_t page) {
  try {
    const json j = json::parse(body);
    SearchPage out;
    out.total_count = j.at("total_count").get<std::size_t>();
    for (const auto& item : j.at("items")) {
      out.items.push_back(RawArticle{json_string(item, "title"), json_string(item, "url"),
                                     json_string(item, "source"), json_string(item, "date"),
                                     json_string(item, "snippet")});
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, fmt::format("page {}: {}", page, e.what()));
  }
}

SearchPage HttpNewsSearchClient::search(const KeywordQuery& query, std::size_t page) {
  const auto headers = detail::auth_headers(endpoint_.credential_env);
  const auto body = search_request_json(query, page);
  auto backoff = retry_.backoff;
  for (std::size_t attempt = 0;; ++attempt) {
    if (limiter_) limiter_->acquire();
    httplib::Client client(endpoint_.base_url);
    client.set_connection_timeout(endpoint_.timeout_seconds);
    client.set_read_timeout(endpoint_.timeout_seconds);
    auto res = client.Post("/search", headers, body, "application/json");

    const bool retryable = !res || res->status == 429 || res->status >= 500;
    if (!retryable) {
      if (res->status == 401 || res->status == 403) {
        throw Error(ErrorCode::kAuthFailure, fmt::format("news search HTTP {}", res->status));
      }
      if (res->status != 200) {
        throw Error(ErrorCode::kMalformedResponse,
                    fmt::format("page {}: unexpected HTTP {}", page, res->status));
      }
      return parse_search_page(res->body, page);
    }
    if (attempt >= retry_.max_retries) {
      if (res && res->status == 429) {
        throw Error(ErrorCode::kRateLimited,
                    fmt::format("page {}: still rate limited after {} retries", page, attempt));
      }
      throw Error(ErrorCode::kIoError,
                  res ? fmt::format("page {}: HTTP {} after {} retries", page, res->status, attempt)
                      : fmt::format("page {}: {}", page, httplib::to_string(res.error())));
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", tm.tm_year + 1900,
                     tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
}

ArticleRecord to_article(const RawArticle& raw, const KeywordQuery& query,
                         const std::string& retrieved_at) {
  ArticleRecord a;
  a.article_id = make_article_id(raw.url, raw.title, raw.date);
  a.title = raw.title;
  a.body = raw.snippet;
  a.source = raw.source;
  a.url = raw.url;
  a.publication_date = raw.date;
  a.retrieved_at = retrieved_at;
  const std::string text = lower(raw.title + "\n" + raw.snippet);
  for (const auto& term : query.terms) {
    if (text.find(lower(term)) != std::string::npos) a.matched_keywords.push_back(term);
  }
  a.status = ArticleStatus::kPending;
  return a;
}

FetchResult fetch_articles(NewsSearchClient& client, const KeywordQuery& query,
                           const Clock& clock) {
  validate_query(query);
  FetchResult result;
  const std::string now = clock ? clock() : utc_now();

  ++result.requests;
  const SearchPage first = client.search(query, 1);
  const std::size_t limit = std::min(first.total_count, query.max_results);
  const std::size_t pages =
      first.total_count == 0 ? 1 : (limit + query.page_size - 1) / query.page_size;

  auto take = [&](const SearchPage& page) {
    for (const auto& raw : page.items) {
      if (result.articles.size() >= limit) break;
      result.articles.push_back(to_article(raw, query, now));
    }
  };
  take(first);

  for (std::size_t p = 2; p <= pages && result.articles.size() < limit; ++p) {
    SearchPage page;
    try {
      ++result.requests;
      page = client.search(query, p);
    } catch (const Error& e) {
      result.warnings.push_back(fmt::format("stopped at page {} of {}: {}: {}", p, pages,
                                            error_code_name(e.code()), e.what()));
      break;
    }
    if (page.items.empty()) break;
    take(page);
  }
  return result;
}

std::vector<ArticleRecord> dedup_corpus(const std::vector<ArticleRecord>& records) {
  std::vector<ArticleRecord> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.article_id).second) out.push_back(r);
  }
  return out;
}

IncidentRecord extract_features(AnswerProvider& provider, const ArticleRecord& article,
                                const FeatureSchema& schema, Label label) {
  IncidentRecord rec;
  rec.incident_id = article.article_id;
  rec.label = label;
  rec.source_article_ids = {article.article_id};
  for (const auto& spec : schema.features()) {
    if (spec.kind != FeatureKind::kBoolean) continue;
    const Answer a = provider.answer(
        article, fmt::format("Does the article indicate: {}?", spec.display_name), spec.key);
    rec.values[spec.key] = a == Answer::kYes ? TriState::kYes : TriState::kNo;
  }
  return rec;
}

std::vector<RawArticle> generate_fake_corpus(const FakeCorpusOptions& options) {
  static const char* kCompanies[] = {"Northwind Apparel", "Blue Harbor Seafoods",
                                     "Granite Steelworks", "Sunfield Growers",
                                     "Meridian Mining", "Lotus Hotels Group"};
  static const char* kProducts[] = {"cotton", "tuna", "steel", "onions", "cobalt", "gold",
                                    "garments", "shrimp"};
  static const char* kSources[] = {"Global Wire", "Harbor Times", "Trade Ledger",
                                   "Daily Chronicle"};
  static const char* kEvidence[] = {
      "Workers were housed in crowded company dormitories.",
      "The goods were exported to buyers in Europe and the United States.",
      "The sourcing region is rated a high-risk country on the corruption index.",
      "Investigators found forged passports and falsified contracts.",
      "Children were found working alongside adults.",
      "Employees described mandatory overtime with no option to refuse.",
      "Customs officials issued a withhold release order and seized shipments.",
      "The company bus transported workers between the camp and the site.",
      "The product appears on the list of goods produced with forced labor.",
      "The supplier sourced from a plantation that relies on prison labor.",
  };
  static const char* kNeutral[] = {
      "Analysts expect prices to stabilise next quarter.",
      "The company reported higher quarterly earnings.",
      "Shipping delays eased after the port reopened.",
      "Executives announced a new distribution centre.",
  };

  std::mt19937_64 rng(options.seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  std::vector<RawArticle> out;
  for (std::size_t i = 0; i < options.size; ++i) {
    const std::string company = kCompanies[pick(std::size(kCompanies))];
    const std::string product = kProducts[pick(std::size(kProducts))];
    const bool relevant = pick(100) < 55;
    RawArticle a;
    a.source = kSources[pick(std::size(kSources))];
    const int year = 2016 + static_cast<int>(pick(9));
    a.date = fmt::format("{:04d}-{:02d}-{:02d}", year, 1 + pick(12), 1 + pick(28));
    std::string snippet;
    if (relevant) {
      a.title = fmt::format("{} accused of forced labor in {} supply chain", company, product);
      snippet = fmt::format("Reports link forced labor to the {} supply chain of {}. ", product,
                            company);
      for (const char* e : kEvidence) {
        if (pick(100) < 40) snippet += std::string(e) + " ";
      }
    } else {
      a.title = fmt::format("{} supply chain update for {}", product, company);
      snippet = fmt::format("The supply chain for {} at {} is under review. ", product, company);
      snippet += kNeutral[pick(std::size(kNeutral))];
      if (pick(100) < 30) snippet += std::string(" ") + kEvidence[1];
    }
    a.snippet = trim(snippet);
    a.url = fmt::format("https://news.example.org/{}/article-{:04d}", year, i);
    out.push_back(std::move(a));
  }
  // A syndicated copy exercises deduplication.
  if (out.size() > 2) {
    RawArticle copy = out[1];
    copy.url = "HTTPS://NEWS.EXAMPLE.ORG" + copy.url.substr(std::string("https://news.example.org").size()) + "/";
    out.push_back(std::move(copy));
  }
  return out;
}

struct FakeNewsServer::Impl {
  std::vector<RawArticle> corpus;
  std::string token;
  httplib::Server server;
  std::thread thread;
  std::atomic<std::size_t> requests{0};
  std::mutex mutex;
  std::map<std::size_t, int> failures;
};

FakeNewsServer::FakeNewsServer(std::vector<RawArticle> corpus, std::string required_token)
    : impl_(std::make_unique<Impl>()) {
  impl_->corpus = std::move(corpus);
  impl_->token = std::move(required_token);
  Impl* impl = impl_.get();
  impl_->server.Post("/search", [impl](const httplib::Request& req, httplib::Response& res) {
    const std::size_t n = ++impl->requests;
    {
      std::lock_guard lock(impl->mutex);
      if (auto it = impl->failures.find(n); it != impl->failures.end()) {
        res.status = it->second;
        res.set_content(R"({"error":"injected failure"})", "application/json");
        return;
      }
    }
    if (!impl->token.empty() && req.get_header_value("Authorization") != "Bearer " + impl->token) {
      res.status = 401;
      res.set_content(R"({"error":"unauthorized"})", "application/json");
      return;
    }
    json q;
    try {
      q = json::parse(req.body);
    } catch (const json::exception&) {
      res.status = 400;
      res.set_content(R"({"error":"bad request"})", "application/json");
      return;
    }
    const auto terms = q.value("terms", std::vector<std::string>{});
    const auto from = q.value("date_from", std::string{});
    const auto to = q.value("date_to", std::string{});
    const auto page = std::max<std::size_t>(1, q.value("page", std::size_t{1}));
    const auto page_size = std::max<std::size_t>(1, q.value("page_size", std::size_t{10}));

    std::vector<const RawArticle*> hits;
    for (const auto& a : impl->corpus) {
      if (!from.empty() && a.date < from) continue;
      if (!to.empty() && a.date > to) continue;
      const std::string text = lower(a.title + "\n" + a.snippet);
      const bool match = std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
        return text.find(lower(t)) != std::string::npos;
      });
      if (match) hits.push_back(&a);
    }
    json items = json::array();
    for (std::size_t i = (page - 1) * page_size; i < hits.size() && i < page * page_size; ++i) {
      const auto& a = *hits[i];
      items.push_back({{"title", a.title}, {"url", a.url}, {"source", a.source},
                       {"date", a.date}, {"snippet", a.snippet}});
    }
    res.set_content(json{{"total_count", hits.size()}, {"items", items}}.dump(),
                    "application/json");
  });
}

FakeNewsServer::~FakeNewsServer() { stop(); }

int FakeNewsServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::kIoError, fmt::format("cannot bind {}:{}", host, port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void FakeNewsServer::listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kIoError, fmt::format("cannot listen on {}:{}", host, port));
  }
}

void FakeNewsServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::size_t FakeNewsServer::requests() const { return impl_->requests.load(); }

void FakeNewsServer::fail_request(std::size_t n, int status) {
  std::lock_guard lock(impl_->mutex);
  impl_->failures[n] = status;
}

}  // namespace flminer
