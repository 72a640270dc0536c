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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "flminer/corpus_store.hpp"
#include "flminer/feature_model.hpp"
#include "flminer/ingest.hpp"
#include "flminer/qtree.hpp"

namespace flminer {

struct ServiceOptions {
  double threshold = 0.5;
  std::string default_annotator = "annotator";
  std::filesystem::path static_dir;  // mounted at "/" when set
  Clock clock = utc_now;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Manual annotation over the question tree, backed by the corpus store.
/// Every answer is persisted as it arrives; the session (frontier, live
/// score) is always recomputed from the stored answers. The handlers are
/// callable directly; start()/listen() expose them over HTTP:
///
///   GET  /api/tree
///   GET  /api/articles[?status=pending]
///   GET  /api/articles/{id}
///   GET  /api/articles/{id}/session
///   POST /api/articles/{id}/answers    {"node_id", "answer", "annotator"?}
///   POST /api/articles/{id}/features   {"label"?, "values": {key: cell}}
///   POST /api/articles/{id}/complete   {"annotator"?}
///   GET  /api/export/incidents
class AnnotationService {
 public:
  AnnotationService(QuestionTree tree, CorpusStore& store,
                    FeatureSchema schema = FeatureSchema::default_schema(),
                    ServiceOptions options = {});
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  ApiResponse get_tree() const;
  ApiResponse list_articles(const std::optional<std::string>& status) const;
  ApiResponse get_article(const std::string& id) const;
  ApiResponse get_session(const std::string& id) const;
  ApiResponse post_answer(const std::string& id, const std::string& body);
  ApiResponse post_features(const std::string& id, const std::string& body);
  ApiResponse post_complete(const std::string& id, const std::string& body);
  ApiResponse export_incidents() const;

  /// Session derived from the stored answers, or nullopt for unknown articles.
  std::optional<nlohmann::json> session_json(const std::string& id) const;

  /// Binds (port 0 = any free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  /// Blocks serving on the calling thread.
  void listen(const std::string& host, int port);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace flminer
