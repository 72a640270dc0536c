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

#include "flminer/annotation_service.hpp"

#include <set>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "flminer/error.hpp"

namespace flminer {
namespace {

using nlohmann::json;

ApiResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

ApiResponse error_response(int status, std::string_view error, std::string_view message) {
  return json_response(status, {{"error", error}, {"message", message}});
}

ApiResponse not_found(const std::string& id) {
  return error_response(404, "not_found", "unknown article " + id);
}

std::optional<json> parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    json j = json::parse(body);
    if (!j.is_object()) return std::nullopt;
    return j;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

json article_summary(const ArticleRecord& a) {
  return {{"article_id", a.article_id},
          {"title", a.title},
          {"source", a.source},
          {"publication_date", a.publication_date},
          {"status", article_status_name(a.status)},
          {"relevance_score", a.relevance_score ? json(*a.relevance_score) : json(nullptr)}};
}

bool completed(const ArticleRecord& a) {
  return a.status == ArticleStatus::kAnnotated || a.status == ArticleStatus::kDiscarded;
}

}  // namespace

struct AnnotationService::Impl {
  QuestionTree tree;
  CorpusStore& store;
  FeatureSchema schema;
  ServiceOptions options;
  std::vector<std::size_t> topo;

  std::mutex locks_mutex;
  std::map<std::string, std::unique_ptr<std::mutex>> locks;

  httplib::Server server;
  std::thread thread;

  Impl(QuestionTree t, CorpusStore& s, FeatureSchema sc, ServiceOptions o)
      : tree(std::move(t)), store(s), schema(std::move(sc)), options(std::move(o)) {}

  std::mutex& lock_for(const std::string& id) {
    std::lock_guard g(locks_mutex);
    auto& m = locks[id];
    if (!m) m = std::make_unique<std::mutex>();
    return *m;
  }

  std::string now() const { return options.clock ? options.clock() : utc_now(); }

  struct Session {
    ArticleRecord article;
    Evaluation eval;
    std::set<std::size_t> frontier;
    std::vector<AnswerRecord> answers;
  };

  std::optional<Session> session(const std::string& id) const {
    const CorpusState state = store.snapshot();
    const ArticleRecord* a = state.find(id);
    if (!a) return std::nullopt;
    Session s{*a, Evaluation::empty_for(tree, id), {}, {}};
    if (auto it = state.answers.find(id); it != state.answers.end()) s.answers = it->second;
    for (const auto& ans : s.answers) {
      const auto idx = tree.index_of(ans.node_id);
      if (!idx) throw Error(ErrorCode::kMismatchedTree, "stored answer for unknown node " + ans.node_id);
      s.eval.nodes[*idx] = NodeResult{NodeState::kAnswered, ans.answer};
    }
    s.frontier = eligible_frontier(tree, s.eval);
    return s;
  }

  json to_json(const Session& s) const {
    json answers = json::array();
    for (const auto& a : s.answers) {
      answers.push_back({{"node_id", a.node_id}, {"answer", answer_name(a.answer)}});
    }
    json frontier = json::array();
    for (std::size_t i : topo) {
      if (s.frontier.count(i)) frontier.push_back(tree.node(i).id);
    }
    json pruned = json::array();
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (s.eval.nodes[i].state == NodeState::kPruned) pruned.push_back(tree.node(i).id);
    }
    const double score = relevance_score(tree, s.eval);
    const std::string annotator =
        s.answers.empty() ? options.default_annotator : s.answers.back().annotator;
    return {{"article_id", s.article.article_id},
            {"annotator", annotator},
            {"answers", answers},
            {"frontier", frontier},
            {"pruned", pruned},
            {"score", score},
            {"threshold", options.threshold},
            {"classification", relevance_name(classify(score, options.threshold))},
            {"completed", completed(s.article)},
            {"status", article_status_name(s.article.status)}};
  }
};

AnnotationService::AnnotationService(QuestionTree tree, CorpusStore& store, FeatureSchema schema,
                                     ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(tree), store, std::move(schema), std::move(options))) {
  if (auto problems = validate_tree(impl_->tree); !problems.empty()) {
    throw Error(ErrorCode::kInvalidTree, problems.front());
  }
  impl_->topo = impl_->tree.topological_order();

  auto& svr = impl_->server;
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type.c_str());
  };
  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    ApiResponse r = error_response(500, "internal", "unexpected failure");
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      r = error_response(500, error_code_name(e.code()), e.what());
    } catch (const std::exception& e) {
      r = error_response(500, "internal", e.what());
    } catch (...) {
    }
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });

  svr.Get("/api/tree", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, get_tree());
  });
  svr.Get("/api/articles", [this, send](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> status;
    if (req.has_param("status")) status = req.get_param_value("status");
    send(res, list_articles(status));
  });
  svr.Get(R"(/api/articles/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_article(req.matches[1]));
  });
  svr.Get(R"(/api/articles/([^/]+)/session)",
          [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, get_session(req.matches[1]));
          });
  svr.Post(R"(/api/articles/([^/]+)/answers)",
           [this, send](const httplib::Request& req, httplib::Response& res) {
             send(res, post_answer(req.matches[1], req.body));
           });
  svr.Post(R"(/api/articles/([^/]+)/features)",
           [this, send](const httplib::Request& req, httplib::Response& res) {
             send(res, post_features(req.matches[1], req.body));
           });
  svr.Post(R"(/api/articles/([^/]+)/complete)",
           [this, send](const httplib::Request& req, httplib::Response& res) {
             send(res, post_complete(req.matches[1], req.body));
           });
  svr.Get("/api/export/incidents", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, export_incidents());
  });
  if (!impl_->options.static_dir.empty()) {
    if (!svr.set_mount_point("/", impl_->options.static_dir.string())) {
      throw Error(ErrorCode::kInvalidConfig,
                  "static directory not found: " + impl_->options.static_dir.string());
    }
  }
}

AnnotationService::~AnnotationService() { stop(); }

ApiResponse AnnotationService::get_tree() const {
  json j = json::parse(impl_->tree.to_json());
  json order = json::array();
  for (std::size_t i : impl_->topo) order.push_back(impl_->tree.node(i).id);
  j["topological_order"] = order;
  j["threshold"] = impl_->options.threshold;
  return json_response(200, j);
}

ApiResponse AnnotationService::list_articles(const std::optional<std::string>& status) const {
  std::optional<ArticleStatus> filter;
  if (status) {
    filter = parse_article_status(*status);
    if (!filter) return error_response(400, "bad_request", "unknown status " + *status);
  }
  json items = json::array();
  for (const auto& a : impl_->store.articles(filter)) items.push_back(article_summary(a));
  return json_response(200, {{"articles", items}});
}

ApiResponse AnnotationService::get_article(const std::string& id) const {
  const auto a = impl_->store.article(id);
  if (!a) return not_found(id);
  return json_response(200, article_to_json(*a));
}

std::optional<json> AnnotationService::session_json(const std::string& id) const {
  const auto s = impl_->session(id);
  if (!s) return std::nullopt;
  return impl_->to_json(*s);
}

ApiResponse AnnotationService::get_session(const std::string& id) const {
  const auto s = session_json(id);
  if (!s) return not_found(id);
  return json_response(200, *s);
}

ApiResponse AnnotationService::post_answer(const std::string& id, const std::string& body) {
  const auto req = parse_body(body);
  if (!req) return error_response(400, "bad_request", "body must be a JSON object");
  if (!req->contains("node_id") || !(*req)["node_id"].is_string() || !req->contains("answer") ||
      !(*req)["answer"].is_string()) {
    return error_response(400, "bad_request", "node_id and answer are required strings");
  }
  const std::string node_id = (*req)["node_id"].get<std::string>();
  const auto answer = parse_answer((*req)["answer"].get<std::string>());
  if (!answer) return error_response(400, "bad_request", "answer must be yes or no");
  const std::string annotator = req->value("annotator", impl_->options.default_annotator);

  std::lock_guard lock(impl_->lock_for(id));
  auto s = impl_->session(id);
  if (!s) return not_found(id);
  if (completed(s->article)) return error_response(409, "conflict", "session already completed");
  const auto idx = impl_->tree.index_of(node_id);
  if (!idx) return error_response(409, "conflict", "unknown node " + node_id);
  if (!s->frontier.count(*idx)) {
    const auto state = s->eval.nodes[*idx].state;
    const char* why = state == NodeState::kAnswered ? "already answered"
                      : state == NodeState::kPruned ? "pruned"
                                                    : "not yet eligible";
    return error_response(409, "conflict", fmt::format("node {} is {}", node_id, why));
  }
  impl_->store.record_answer({id, node_id, *answer, annotator, impl_->now()});
  return get_session(id);
}

ApiResponse AnnotationService::post_features(const std::string& id, const std::string& body) {
  const auto req = parse_body(body);
  if (!req) return error_response(400, "bad_request", "body must be a JSON object");
  if (!impl_->store.article(id)) return not_found(id);

  IncidentRecord rec;
  std::string label_text;
  try {
    rec.incident_id = req->value("incident_id", id);
    rec.source_article_ids = req->value("source_article_ids", std::vector<std::string>{id});
    label_text = req->value("label", std::string{"pos"});
  } catch (const json::exception&) {
    return error_response(400, "bad_request",
                          "incident_id and label must be strings, source_article_ids a list of strings");
  }
  json violations = json::array();
  const auto label = parse_label(label_text);
  if (!label) {
    violations.push_back({{"key", "label"}, {"rule", "label must be pos or neg"}});
  } else {
    rec.label = *label;
  }
  const json values = req->value("values", json::object());
  if (!values.is_object()) return error_response(400, "bad_request", "values must be an object");
  for (const auto& [key, cell] : values.items()) {
    const FeatureSpec* spec = impl_->schema.find(key);
    if (!spec) {
      violations.push_back({{"key", key}, {"rule", "unknown feature"}});
      continue;
    }
    if (cell.is_null()) continue;
    std::string text;
    if (cell.is_string()) {
      text = cell.get<std::string>();
    } else if (cell.is_number_integer()) {
      text = std::to_string(cell.get<std::int64_t>());
    } else {
      violations.push_back({{"key", key}, {"rule", "value must be a string"}});
      continue;
    }
    try {
      FeatureValue v = decode_value(*spec, text);
      if (!is_missing(v)) rec.values[key] = std::move(v);
    } catch (const Error& e) {
      violations.push_back({{"key", key}, {"rule", e.what()}});
    }
  }
  for (const auto& v : validate_record(rec, impl_->schema)) {
    violations.push_back({{"key", v.key}, {"rule", v.rule}});
  }
  if (!violations.empty()) {
    return json_response(422, {{"error", "validation_failed"}, {"violations", violations}});
  }
  std::lock_guard lock(impl_->lock_for(id));
  impl_->store.record_features(id, rec);
  return json_response(200, {{"incident", incident_to_json(rec)}});
}

ApiResponse AnnotationService::post_complete(const std::string& id, const std::string& body) {
  const auto req = parse_body(body);
  if (!req) return error_response(400, "bad_request", "body must be a JSON object");
  std::lock_guard lock(impl_->lock_for(id));
  auto s = impl_->session(id);
  if (!s) return not_found(id);
  if (completed(s->article)) return error_response(409, "conflict", "session already completed");
  if (!s->frontier.empty()) {
    return error_response(409, "conflict",
                          fmt::format("{} question(s) still open", s->frontier.size()));
  }
  const std::string annotator = req->value(
      "annotator", s->answers.empty() ? impl_->options.default_annotator : s->answers.back().annotator);
  const EvaluationRecord rec = make_evaluation_record(impl_->tree, s->eval, impl_->options.threshold,
                                                      "human:" + annotator, impl_->now());
  impl_->store.record_evaluation(rec);
  impl_->store.update_status(id,
                             rec.classification == Relevance::kRelevant ? ArticleStatus::kAnnotated
                                                                        : ArticleStatus::kDiscarded,
                             rec.score);
  json out = *session_json(id);
  out["evaluation"] = evaluation_to_json(rec);
  return json_response(200, out);
}

ApiResponse AnnotationService::export_incidents() const {
  const CorpusState state = impl_->store.snapshot();
  LabeledDataset ds{impl_->schema, {}};
  for (const auto& a : state.articles) {
    if (auto it = state.features.find(a.article_id); it != state.features.end()) {
      ds.records.push_back(it->second);
    }
  }
  return {200, write_incident_csv(ds), "text/csv"};
}

int AnnotationService::start(const std::string& host, int port) {
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

void AnnotationService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void AnnotationService::listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kIoError, fmt::format("cannot listen on {}:{}", host, port));
  }
}

}  // namespace flminer
