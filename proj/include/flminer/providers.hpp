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

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flminer/qtree.hpp"

namespace flminer {

/// Prompt in, completion out.
class TextModelProvider {
 public:
  virtual ~TextModelProvider() = default;
  virtual std::string complete(std::string_view prompt) = 0;
  virtual std::string identity() const = 0;
};

/// Returns canned completions: the first entry whose key occurs in the
/// prompt wins, otherwise `fallback`.
class StubTextModel : public TextModelProvider {
 public:
  explicit StubTextModel(std::string fallback,
                         std::vector<std::pair<std::string, std::string>> rules = {})
      : fallback_(std::move(fallback)), rules_(std::move(rules)) {}

  std::string complete(std::string_view prompt) override;
  std::string identity() const override { return "stub-text-model"; }

 private:
  std::string fallback_;
  std::vector<std::pair<std::string, std::string>> rules_;
};

struct HttpEndpoint {
  std::string base_url;        // e.g. http://127.0.0.1:8090
  std::string credential_env;  // environment variable holding a bearer token; may be empty
  int timeout_seconds = 30;
};

/// POST {base_url}/complete with {"prompt"} and reads {"completion"}.
class HttpTextModel : public TextModelProvider {
 public:
  explicit HttpTextModel(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string complete(std::string_view prompt) override;
  std::string identity() const override { return "http-text-model:" + endpoint_.base_url; }

 private:
  HttpEndpoint endpoint_;
};

using ProviderCallSink =
    std::function<void(const std::string& identity, std::string_view prompt,
                       std::string_view completion)>;

/// Forwards to `inner` and reports every completed call to `sink`.
class RecordingTextModel : public TextModelProvider {
 public:
  RecordingTextModel(TextModelProvider& inner, ProviderCallSink sink)
      : inner_(inner), sink_(std::move(sink)) {}
  std::string complete(std::string_view prompt) override;
  std::string identity() const override { return inner_.identity(); }

 private:
  TextModelProvider& inner_;
  ProviderCallSink sink_;
};

/// Answers from a fixed node -> answer table; unknown nodes get `fallback`
/// or, when no fallback is set, throw.
class ScriptedAnswerProvider : public AnswerProvider {
 public:
  explicit ScriptedAnswerProvider(std::map<std::string, Answer, std::less<>> answers,
                                  std::optional<Answer> fallback = std::nullopt)
      : answers_(std::move(answers)), fallback_(fallback) {}

  Answer answer(const ArticleRecord& article, std::string_view question,
                std::string_view node_id) override;
  std::string identity() const override { return "scripted"; }

 private:
  std::map<std::string, Answer, std::less<>> answers_;
  std::optional<Answer> fallback_;
};

/// Yes iff the lowercased title + body contains one of the node's phrases.
class KeywordAnswerProvider : public AnswerProvider {
 public:
  explicit KeywordAnswerProvider(std::map<std::string, std::vector<std::string>, std::less<>> phrases)
      : phrases_(std::move(phrases)) {}

  /// Phrases from the tree's node keywords plus default_feature_keywords().
  static KeywordAnswerProvider for_tree(const QuestionTree& tree);

  Answer answer(const ArticleRecord& article, std::string_view question,
                std::string_view node_id) override;
  std::string identity() const override { return "keyword-stub"; }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> phrases_;
};

/// Asks a text model and expects the completion to start with yes or no.
class TextModelAnswerProvider : public AnswerProvider {
 public:
  explicit TextModelAnswerProvider(TextModelProvider& model) : model_(model) {}

  Answer answer(const ArticleRecord& article, std::string_view question,
                std::string_view node_id) override;
  std::string identity() const override { return "text-model:" + model_.identity(); }

  static std::string prompt_for(const ArticleRecord& article, std::string_view question);

 private:
  TextModelProvider& model_;
};

/// Phrases per Boolean feature key, used by the keyword provider when it
/// extracts features.
const std::map<std::string, std::vector<std::string>, std::less<>>& default_feature_keywords();

}  // namespace flminer
