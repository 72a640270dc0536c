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

#include "flminer/providers.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "flminer/error.hpp"
#include "http_util.hpp"

namespace flminer {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string StubTextModel::complete(std::string_view prompt) {
  for (const auto& [needle, completion] : rules_) {
    if (prompt.find(needle) != std::string_view::npos) return completion;
  }
  return fallback_;
}

std::string HttpTextModel::complete(std::string_view prompt) {
  httplib::Client client(endpoint_.base_url);
  client.set_connection_timeout(endpoint_.timeout_seconds);
  client.set_read_timeout(endpoint_.timeout_seconds);
  const auto body = nlohmann::json{{"prompt", prompt}}.dump();
  auto res = client.Post("/complete", detail::auth_headers(endpoint_.credential_env), body,
                         "application/json");
  if (!res) {
    throw Error(ErrorCode::kProviderFailure,
                "text model unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    throw Error(ErrorCode::kAuthFailure, "text model rejected credentials");
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kProviderFailure, fmt::format("text model HTTP {}", res->status));
  }
  try {
    return nlohmann::json::parse(res->body).at("completion").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("text model response: ") + e.what());
  }
}

std::string RecordingTextModel::complete(std::string_view prompt) {
  std::string completion = inner_.complete(prompt);
  sink_(inner_.identity(), prompt, completion);
  return completion;
}

Answer ScriptedAnswerProvider::answer(const ArticleRecord&, std::string_view,
                                      std::string_view node_id) {
  auto it = answers_.find(node_id);
  if (it != answers_.end()) return it->second;
  if (fallback_) return *fallback_;
  throw Error(ErrorCode::kProviderFailure, fmt::format("no scripted answer for {}", node_id));
}

KeywordAnswerProvider KeywordAnswerProvider::for_tree(const QuestionTree& tree) {
  auto phrases = default_feature_keywords();
  for (const auto& n : tree.nodes()) phrases[n.id] = n.keywords;
  return KeywordAnswerProvider(std::move(phrases));
}

Answer KeywordAnswerProvider::answer(const ArticleRecord& article, std::string_view,
                                     std::string_view node_id) {
  auto it = phrases_.find(node_id);
  if (it == phrases_.end()) return Answer::kNo;
  const std::string text = lower(article.title + "\n" + article.body);
  for (const auto& phrase : it->second) {
    if (!phrase.empty() && text.find(lower(phrase)) != std::string::npos) return Answer::kYes;
  }
  return Answer::kNo;
}

std::string TextModelAnswerProvider::prompt_for(const ArticleRecord& article,
                                                std::string_view question) {
  return fmt::format(
      "Read the news article below and answer the question with a single word, yes or no.\n"
      "Question: {}\n"
      "Title: {}\n"
      "Article:\n{}\n",
      question, article.title, article.body);
}

Answer TextModelAnswerProvider::answer(const ArticleRecord& article, std::string_view question,
                                       std::string_view node_id) {
  const std::string completion = lower(model_.complete(prompt_for(article, question)));
  const auto start = completion.find_first_not_of(" \t\r\n\"'");
  if (start != std::string::npos) {
    const std::string_view word = std::string_view(completion).substr(start);
    if (word.starts_with("yes")) return Answer::kYes;
    if (word.starts_with("no")) return Answer::kNo;
  }
  throw Error(ErrorCode::kProviderFailure,
              fmt::format("unusable answer for {}: '{}'", node_id, completion));
}

const std::map<std::string, std::vector<std::string>, std::less<>>& default_feature_keywords() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> table = {
      {"cross_border", {"export", "import", "shipped to", "cross-border"}},
      {"high_risk_source", {"high-risk country", "xinjiang", "north korea", "corruption index"}},
      {"high_risk_product", {"list of goods", "high-risk product", "withhold release order"}},
      {"fake_documentation", {"forged", "fake documents", "falsified"}},
      {"raw_material_supplier", {"raw material", "mine", "plantation", "harvest"}},
      {"firm_provided_housing", {"housing", "housed", "dormitor"}},
      {"firm_provided_transportation", {"transported workers", "company bus", "transportation"}},
      {"forced_labor_detected", {"forced labor", "forced labour"}},
      {"slave_labor_detected", {"slave", "slavery"}},
      {"child_labor_detected", {"child labor", "child labour", "children"}},
      {"mandatory_overtime", {"overtime"}},
      {"sex_trafficking", {"sex trafficking"}},
      {"prison_labor_voluntary", {"voluntary prison labor"}},
      {"prison_labor_forced", {"prison labor", "prisoners forced"}},
  };
  return table;
}

}  // namespace flminer
