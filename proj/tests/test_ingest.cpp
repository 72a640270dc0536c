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

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "flminer/error.hpp"
#include "flminer/ingest.hpp"
#include "support.hpp"

namespace flminer {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

class ThrowingModel : public TextModelProvider {
 public:
  std::string complete(std::string_view) override { throw std::runtime_error("offline"); }
  std::string identity() const override { return "throwing"; }
};

TEST(Keywords, SeedsFirstThenModelPhrases) {
  StubTextModel model("1. Debt bondage\n- forced labor\n* Child Labor\n\n2) wage theft\n");
  const auto kw = generate_keywords(model, "forced labor in supply chains", 4);
  EXPECT_EQ(kw, (std::vector<std::string>{"forced labor", "supply chain", "debt bondage", "child labor"}));
  EXPECT_EQ(generate_keywords(model, "x", 2), kSeedTerms);
  EXPECT_EQ(generate_keywords(model, "x", 10).size(), 5u);
}

TEST(Keywords, Errors) {
  StubTextModel empty("  \n- \n");
  EXPECT_EQ(code_of([&] { generate_keywords(empty, "x", 4); }), ErrorCode::kEmptyCompletion);
  ThrowingModel throwing;
  EXPECT_EQ(code_of([&] { generate_keywords(throwing, "x", 4); }), ErrorCode::kProviderFailure);
  StubTextModel ok("a\n");
  EXPECT_EQ(code_of([&] { generate_keywords(ok, "x", 0); }), ErrorCode::kInvalidConfig);
}

TEST(Keywords, PromptMentionsTopic) {
  const auto p = keyword_prompt("bonded labour");
  EXPECT_NE(p.find("bonded labour"), std::string::npos);
  EXPECT_EQ(p.find("{topic}"), std::string::npos);
}

// Serves `total` synthetic items; page `fail_page` throws.
class ScriptedClient : public NewsSearchClient {
 public:
  ScriptedClient(std::size_t total, std::size_t fail_page = 0) : total_(total), fail_page_(fail_page) {}
  SearchPage search(const KeywordQuery& q, std::size_t page) override {
    ++calls;
    if (page == fail_page_) throw Error(ErrorCode::kIoError, "boom");
    SearchPage p{total_, {}};
    for (std::size_t i = (page - 1) * q.page_size; i < total_ && i < page * q.page_size; ++i) {
      p.items.push_back(RawArticle{"Forced labor story " + std::to_string(i),
                                   "https://news.example/" + std::to_string(i), "wire",
                                   "2024-01-0" + std::to_string(1 + i % 9), "supply chain snippet"});
    }
    return p;
  }
  std::size_t calls = 0;

 private:
  std::size_t total_;
  std::size_t fail_page_;
};

std::string fixed_clock() { return "2024-06-01T00:00:00Z"; }

TEST(Fetch, PaginatesToTotal) {
  ScriptedClient client(25);
  KeywordQuery q;
  const auto r = fetch_articles(client, q, fixed_clock);
  EXPECT_EQ(r.requests, 3u);
  EXPECT_EQ(client.calls, 3u);
  EXPECT_EQ(r.articles.size(), 25u);
  EXPECT_TRUE(r.warnings.empty());
  for (const auto& a : r.articles) {
    EXPECT_EQ(a.status, ArticleStatus::kPending);
    EXPECT_EQ(a.retrieved_at, "2024-06-01T00:00:00Z");
    EXPECT_EQ(a.matched_keywords, kSeedTerms);
  }
}

TEST(Fetch, EmptyResult) {
  ScriptedClient client(0);
  const auto r = fetch_articles(client, KeywordQuery{}, fixed_clock);
  EXPECT_EQ(r.requests, 1u);
  EXPECT_TRUE(r.articles.empty());
}

TEST(Fetch, MaxResultsCapsPages) {
  ScriptedClient client(500);
  KeywordQuery q;
  q.max_results = 30;
  const auto r = fetch_articles(client, q, fixed_clock);
  EXPECT_EQ(r.requests, 3u);
  EXPECT_EQ(r.articles.size(), 30u);
}

TEST(Fetch, LaterPageFailureKeepsPartialResults) {
  ScriptedClient client(25, 2);
  const auto r = fetch_articles(client, KeywordQuery{}, fixed_clock);
  EXPECT_EQ(r.articles.size(), 10u);
  EXPECT_EQ(r.warnings.size(), 1u);
  ScriptedClient first(25, 1);
  EXPECT_EQ(code_of([&] { fetch_articles(first, KeywordQuery{}, fixed_clock); }), ErrorCode::kIoError);
}

TEST(Fetch, QueryValidation) {
  ScriptedClient client(5);
  KeywordQuery q;
  q.terms.clear();
  EXPECT_EQ(code_of([&] { fetch_articles(client, q, fixed_clock); }), ErrorCode::kInvalidConfig);
  q = KeywordQuery{};
  q.page_size = 0;
  EXPECT_EQ(code_of([&] { fetch_articles(client, q, fixed_clock); }), ErrorCode::kInvalidConfig);
  q = KeywordQuery{};
  q.date_from = "2024-13-01";
  EXPECT_EQ(code_of([&] { fetch_articles(client, q, fixed_clock); }), ErrorCode::kInvalidConfig);
}

TEST(Articles, IdIsDeterministicAndNormalized) {
  const auto a = make_article_id("https://News.Example.com/x/", "T", "2024-01-01");
  EXPECT_EQ(a, make_article_id("https://news.example.com/x", "T", "2024-01-01"));
  EXPECT_NE(a, make_article_id("https://news.example.com/y", "T", "2024-01-01"));
  EXPECT_EQ(a.size(), 16u);
}

TEST(Articles, Dedup) {
  auto rec = [](std::string id, std::string title) {
    ArticleRecord r;
    r.article_id = std::move(id);
    r.title = std::move(title);
    return r;
  };
  const auto a = rec("id1", "A"), b = rec("id2", "B"), a2 = rec("id1", "A again");
  const auto d = dedup_corpus({a, b, a2});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].title, "A");
  EXPECT_EQ(dedup_corpus(d), d);
  EXPECT_TRUE(dedup_corpus({}).empty());
}

TEST(Articles, MatchedKeywords) {
  KeywordQuery q;
  q.terms = {"forced labor", "cotton", "debt bondage"};
  const auto a = to_article({"Cotton and Forced Labor", "http://x/1", "s", "2024-01-01", "snip"}, q, "t");
  EXPECT_EQ(a.matched_keywords, (std::vector<std::string>{"forced labor", "cotton"}));
  EXPECT_EQ(a.body, "snip");
}

TEST(Features, ExtractedThroughProvider) {
  const auto& schema = FeatureSchema::default_schema();
  ScriptedAnswerProvider provider({{"cross_border", Answer::kYes}}, Answer::kNo);
  ArticleRecord article;
  article.article_id = "art1";
  const auto rec = extract_features(provider, article, schema, Label::kPositive);
  EXPECT_EQ(rec.incident_id, "art1");
  EXPECT_EQ(rec.label, Label::kPositive);
  EXPECT_TRUE(validate_record(rec, schema).empty());
}

TEST(FakeCorpus, DeterministicWithSyndicatedDuplicate) {
  const auto a = generate_fake_corpus({7, 40});
  const auto b = generate_fake_corpus({7, 40});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].url, b[i].url);
  std::set<std::string> ids;
  for (const auto& r : a) ids.insert(make_article_id(r.url, r.title, r.date));
  EXPECT_LT(ids.size(), a.size());
}

class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) {
    if (value) setenv(name, value, 1);
    else unsetenv(name);
  }
  ~EnvGuard() { unsetenv(name_); }

 private:
  const char* name_;
};

TEST(HttpSearch, AgainstFakeServer) {
  FakeNewsServer server(generate_fake_corpus({7, 40}));
  const int port = server.start();
  HttpNewsSearchClient client({"http://127.0.0.1:" + std::to_string(port), "", 5},
                              std::make_shared<RateLimiter>(0));
  const auto r = fetch_articles(client, KeywordQuery{}, fixed_clock);
  EXPECT_FALSE(r.articles.empty());
  EXPECT_EQ(r.requests, server.requests());
  EXPECT_LT(dedup_corpus(r.articles).size(), r.articles.size());
}

TEST(HttpSearch, BearerToken) {
  FakeNewsServer server(generate_fake_corpus({7, 10}), "s3cret");
  const int port = server.start();
  const std::string url = "http://127.0.0.1:" + std::to_string(port);
  {
    EnvGuard env("FLMINER_TEST_NEWS_TOKEN", nullptr);
    HttpNewsSearchClient client({url, "FLMINER_TEST_NEWS_TOKEN", 5}, nullptr);
    EXPECT_EQ(code_of([&] { client.search(KeywordQuery{}, 1); }), ErrorCode::kAuthFailure);
  }
  {
    EnvGuard env("FLMINER_TEST_NEWS_TOKEN", "wrong");
    HttpNewsSearchClient client({url, "FLMINER_TEST_NEWS_TOKEN", 5}, nullptr);
    EXPECT_EQ(code_of([&] { client.search(KeywordQuery{}, 1); }), ErrorCode::kAuthFailure);
  }
  {
    EnvGuard env("FLMINER_TEST_NEWS_TOKEN", "s3cret");
    HttpNewsSearchClient client({url, "FLMINER_TEST_NEWS_TOKEN", 5}, nullptr);
    EXPECT_GT(client.search(KeywordQuery{}, 1).total_count, 0u);
  }
}

TEST(HttpSearch, RetriesServerErrorsAndRateLimits) {
  FakeNewsServer server(generate_fake_corpus({7, 10}));
  const int port = server.start();
  const std::string url = "http://127.0.0.1:" + std::to_string(port);
  RetryPolicy retry{2, std::chrono::milliseconds(1)};
  HttpNewsSearchClient client({url, "", 5}, nullptr, retry);

  server.fail_request(1, 503);
  EXPECT_GT(client.search(KeywordQuery{}, 1).total_count, 0u);
  EXPECT_EQ(server.requests(), 2u);

  for (std::size_t n = 3; n <= 5; ++n) server.fail_request(n, 429);
  EXPECT_EQ(code_of([&] { client.search(KeywordQuery{}, 1); }), ErrorCode::kRateLimited);
  EXPECT_EQ(server.requests(), 5u);

  server.fail_request(6, 404);
  EXPECT_EQ(code_of([&] { client.search(KeywordQuery{}, 1); }), ErrorCode::kMalformedResponse);
}

TEST(HttpSearch, MalformedBody) {
  EXPECT_EQ(code_of([] { parse_search_page("{}", 1); }), ErrorCode::kMalformedResponse);
  EXPECT_EQ(code_of([] { parse_search_page("not json", 1); }), ErrorCode::kMalformedResponse);
  const auto p = parse_search_page(R"({"total_count":1,"items":[{"title":"t","url":"u"}]})", 1);
  EXPECT_EQ(p.items.size(), 1u);
}

TEST(RateLimiter, SpacesRequests) {
  RateLimiter limiter(50);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limiter.acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(90));
}

}  // namespace
}  // namespace flminer
