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

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flminer/article.hpp"
#include "flminer/feature_model.hpp"
#include "flminer/qtree.hpp"

namespace flminer {

struct ProviderCallRecord {
  std::string identity;
  std::string prompt;
  std::string completion;
  std::string at;
};

struct AnswerRecord {
  std::string article_id;
  std::string node_id;
  Answer answer = Answer::kNo;
  std::string annotator;
  std::string at;
};

/// A finished evaluation as stored and exported.
struct EvaluationRecord {
  std::string article_id;
  std::vector<std::pair<std::string, Answer>> answers;  // tree order, asked nodes only
  double score = 0.0;
  double threshold = 0.5;
  Relevance classification = Relevance::kIrrelevant;
  std::string provider;
  std::string at;
  std::optional<ProviderFailure> failure;
};

EvaluationRecord make_evaluation_record(const QuestionTree& tree, const Evaluation& eval,
                                        double threshold, std::string provider, std::string at);

/// Rebuilds the per-node Evaluation from stored answers.
Evaluation evaluation_from_record(const QuestionTree& tree, const EvaluationRecord& record);

nlohmann::json article_to_json(const ArticleRecord& a);
ArticleRecord article_from_json(const nlohmann::json& j);
nlohmann::json evaluation_to_json(const EvaluationRecord& r);
EvaluationRecord evaluation_from_json(const nlohmann::json& j);

/// {"incident_id", "label": "pos"|"neg", "source_article_ids": [...],
///  "values": {key: cell}} with cells in the incident CSV encoding; missing
/// values are omitted.
nlohmann::json incident_to_json(const IncidentRecord& r);
IncidentRecord incident_from_json(const nlohmann::json& j, const FeatureSchema& schema);

/// Latest state after replaying the log.
struct CorpusState {
  std::vector<ArticleRecord> articles;  // first-append order
  std::map<std::string, std::size_t> index;
  std::vector<ProviderCallRecord> provider_calls;
  std::map<std::string, std::vector<AnswerRecord>> answers;
  std::map<std::string, EvaluationRecord> evaluations;
  std::map<std::string, IncidentRecord> features;
  std::vector<std::string> warnings;

  const ArticleRecord* find(const std::string& article_id) const;
};

/// Replays a corpus log. A malformed final line is skipped with a warning (it
/// is what an interrupted append leaves behind); any other malformed line
/// throws CorruptEntry. A missing file is an empty corpus.
CorpusState load_corpus(const std::filesystem::path& path,
                        const FeatureSchema& schema = FeatureSchema::default_schema());

/// Append-only JSONL corpus. One writer per file; every append is flushed
/// before it becomes visible in the in-memory state. Opening repairs a torn
/// final line.
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path path,
                       FeatureSchema schema = FeatureSchema::default_schema());

  const std::filesystem::path& path() const noexcept { return path_; }
  CorpusState snapshot() const;
  std::vector<std::string> warnings() const;

  /// Skips ids already present; returns how many were appended.
  std::size_t append_articles(const std::vector<ArticleRecord>& articles);
  /// Throws InvalidTransition for unknown articles and backward moves.
  void update_status(const std::string& article_id, ArticleStatus status,
                     std::optional<double> relevance_score = std::nullopt);
  void record_provider_call(const ProviderCallRecord& call);
  void record_answer(const AnswerRecord& answer);
  void record_evaluation(const EvaluationRecord& evaluation);
  void record_features(const std::string& article_id, const IncidentRecord& record);

  std::optional<ArticleRecord> article(const std::string& article_id) const;
  std::vector<ArticleRecord> articles(std::optional<ArticleStatus> status = std::nullopt) const;

 private:
  void append_locked(const nlohmann::json& entry);

  std::filesystem::path path_;
  FeatureSchema schema_;
  mutable std::mutex mutex_;
  CorpusState state_;
};

}  // namespace flminer
