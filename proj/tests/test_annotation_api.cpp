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

#include <filesystem>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "flminer/annotation_service.hpp"
#include "support.hpp"

namespace flminer {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class AnnotationApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("flminer_api_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    store_ = std::make_unique<CorpusStore>(dir_ / "corpus.jsonl");
    std::vector<ArticleRecord> articles;
    for (int i = 0; i < 12; ++i) {
      ArticleRecord a;
      a.article_id = "a" + std::to_string(i);
      a.title = "Article " + std::to_string(i);
      a.body = "Body";
      articles.push_back(a);
    }
    store_->append_articles(articles);
    ServiceOptions opts;
    opts.clock = [] { return std::string("2024-06-01T00:00:00Z"); };
    service_ = std::make_unique<AnnotationService>(QuestionTree::default_tree(), *store_,
                                                   FeatureSchema::default_schema(), opts);
    port_ = service_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    service_->stop();
    service_.reset();
    store_.reset();
    fs::remove_all(dir_);
  }

  std::pair<int, json> get(const std::string& path) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {0, {}};
    return {res->status, json::parse(res->body, nullptr, false)};
  }
  std::pair<int, json> post(const std::string& path, const json& body) {
    return post_raw(path, body.dump());
  }
  std::pair<int, json> post_raw(const std::string& path, const std::string& body) {
    auto res = client_->Post(path, body, "application/json");
    EXPECT_TRUE(res);
    if (!res) return {0, {}};
    return {res->status, json::parse(res->body, nullptr, false)};
  }
  std::pair<int, json> answer(const std::string& article, const std::string& node, const std::string& a) {
    return post("/api/articles/" + article + "/answers", {{"node_id", node}, {"answer", a}});
  }

  fs::path dir_;
  std::unique_ptr<CorpusStore> store_;
  std::unique_ptr<AnnotationService> service_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(AnnotationApiTest, TreeAndArticles) {
  auto [status, tree] = get("/api/tree");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(tree["topological_order"][0], "q1");
  EXPECT_EQ(tree["threshold"], 0.5);
  auto [s2, list] = get("/api/articles?status=pending");
  EXPECT_EQ(s2, 200);
  EXPECT_EQ(list["articles"].size(), 12u);
  EXPECT_EQ(get("/api/articles?status=bogus").first, 400);
  EXPECT_EQ(get("/api/articles/a1").first, 200);
  EXPECT_EQ(get("/api/articles/zzz").first, 404);
  EXPECT_EQ(get("/api/articles/zzz/session").first, 404);
  EXPECT_EQ(answer("zzz", "q1", "yes").first, 404);
}

TEST_F(AnnotationApiTest, RootNoPrunesEverything) {
  auto [s0, session] = get("/api/articles/a0/session");
  EXPECT_EQ(session["frontier"], json::array({"q1"}));
  auto [status, after] = answer("a0", "q1", "no");
  ASSERT_EQ(status, 200);
  EXPECT_TRUE(after["frontier"].empty());
  EXPECT_EQ(after["score"], 0.0);
  EXPECT_EQ(answer("a0", "q2", "yes").first, 409);
  EXPECT_EQ(answer("a0", "q1", "yes").first, 409);
  auto [sc, done] = post("/api/articles/a0/complete", json::object());
  ASSERT_EQ(sc, 200);
  EXPECT_EQ(done["status"], "discarded");
  EXPECT_EQ(post("/api/articles/a0/complete", json::object()).first, 409);
  EXPECT_EQ(store_->article("a0")->status, ArticleStatus::kDiscarded);
}

TEST_F(AnnotationApiTest, AllYesScoresOne) {
  EXPECT_EQ(answer("a1", "q2", "yes").first, 409);  // not yet eligible
  EXPECT_EQ(answer("a1", "q99", "yes").first, 409);
  for (int guard = 0; guard < 100; ++guard) {
    auto [s, session] = get("/api/articles/a1/session");
    if (session["frontier"].empty()) break;
    EXPECT_EQ(post("/api/articles/a1/complete", json::object()).first, 409);
    ASSERT_EQ(answer("a1", session["frontier"][0], "yes").first, 200);
  }
  auto [s, session] = get("/api/articles/a1/session");
  EXPECT_EQ(session["score"], 1.0);
  EXPECT_EQ(session["classification"], "relevant");
  auto [sc, done] = post("/api/articles/a1/complete", json{{"annotator", "ann1"}});
  ASSERT_EQ(sc, 200);
  EXPECT_EQ(done["status"], "annotated");
  EXPECT_EQ(done["completed"], true);
  EXPECT_EQ(answer("a1", "q1", "no").first, 409);
}

TEST_F(AnnotationApiTest, BadBodies) {
  EXPECT_EQ(post_raw("/api/articles/a2/answers", "not json").first, 400);
  EXPECT_EQ(post("/api/articles/a2/answers", {{"node_id", "q1"}}).first, 400);
  EXPECT_EQ(answer("a2", "q1", "maybe").first, 400);
  EXPECT_EQ(post("/api/articles/a2/features", {{"label", 3}}).first, 400);
  EXPECT_EQ(post("/api/articles/a2/features", {{"values", {{"cross_border", true}}}}).first, 422);
}

TEST_F(AnnotationApiTest, FeaturesValidation) {
  auto [ok, body] = post("/api/articles/a3/features",
                         {{"label", "pos"},
                          {"values", {{"sourcing_characteristic", "Fishing"},
                                      {"cross_border", "Y"},
                                      {"position_in_supply_chain", 2}}}});
  EXPECT_EQ(ok, 200);
  EXPECT_EQ(body["incident"]["incident_id"], "a3");

  auto [bad, err] = post("/api/articles/a4/features", {{"values", {{"position_in_supply_chain", 5}}}});
  EXPECT_EQ(bad, 422);
  ASSERT_FALSE(err["violations"].empty());
  EXPECT_EQ(err["violations"][0]["key"], "position_in_supply_chain");

  EXPECT_EQ(post("/api/articles/a4/features", {{"values", {{"sourcing_characteristic", "Weaving"}}}}).first, 422);
  EXPECT_EQ(post("/api/articles/a4/features", {{"values", {{"no_such_key", "x"}}}}).first, 422);
  EXPECT_EQ(post("/api/articles/a5/features", {{"values", json::object()}}).first, 200);
  EXPECT_EQ(post("/api/articles/zzz/features", {{"values", json::object()}}).first, 404);

  auto res = client_->Get("/api/export/incidents");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto ds = parse_incident_csv(res->body);
  EXPECT_EQ(ds.records.size(), 2u);
  EXPECT_TRUE(validate_dataset(ds).empty());
  EXPECT_EQ(ds.records[0].value("sourcing_characteristic"), FeatureValue(CategoryValue{"Fishing"}));
}

TEST_F(AnnotationApiTest, MatchesBatchEvaluation) {
  testing::Rng rng(41);
  const auto& tree = QuestionTree::default_tree();
  for (int k = 6; k < 12; ++k) {
    const std::string id = "a" + std::to_string(k);
    const auto answers = testing::random_answers(rng, tree, 0.7);
    for (int guard = 0; guard < 100; ++guard) {
      auto [s, session] = get("/api/articles/" + id + "/session");
      if (session["frontier"].empty()) break;
      const auto& frontier = session["frontier"];
      const std::string node = frontier[rng.below(frontier.size())];
      ASSERT_EQ(answer(id, node, answers.at(node) == Answer::kYes ? "yes" : "no").first, 200);
    }
    auto [s, session] = get("/api/articles/" + id + "/session");
    testing::MapProvider provider(answers);
    ArticleRecord article;
    article.article_id = id;
    const auto batch = evaluate(tree, provider, article);
    EXPECT_EQ(session["score"].get<double>(), relevance_score(tree, batch));
    std::set<std::string> api_asked, batch_asked;
    for (const auto& a : session["answers"]) api_asked.insert(a["node_id"].get<std::string>());
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (batch.nodes[i].asked()) batch_asked.insert(tree.node(i).id);
    }
    EXPECT_EQ(api_asked, batch_asked);
  }
}

}  // namespace
}  // namespace flminer
