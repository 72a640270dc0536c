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

#include "flminer/corpus_store.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "flminer/error.hpp"

namespace flminer {
namespace {

using nlohmann::json;

Answer answer_from(const std::string& s) {
  const auto a = parse_answer(s);
  if (!a) throw Error(ErrorCode::kBadValue, "bad answer '" + s + "'");
  return *a;
}

ArticleStatus status_from(const std::string& s) {
  const auto st = parse_article_status(s);
  if (!st) throw Error(ErrorCode::kBadValue, "bad status '" + s + "'");
  return *st;
}

void apply(CorpusState& state, const json& e, const FeatureSchema& schema) {
  const std::string type = e.at("type").get<std::string>();
  if (type == "article") {
    ArticleRecord a = article_from_json(e.at("article"));
    if (state.index.count(a.article_id)) return;
    state.index.emplace(a.article_id, state.articles.size());
    state.articles.push_back(std::move(a));
  } else if (type == "status") {
    const auto id = e.at("article_id").get<std::string>();
    auto it = state.index.find(id);
    if (it == state.index.end()) throw Error(ErrorCode::kBadValue, "status for unknown article " + id);
    auto& a = state.articles[it->second];
    a.status = status_from(e.at("status").get<std::string>());
    if (e.contains("relevance_score")) a.relevance_score = e["relevance_score"].get<double>();
  } else if (type == "provider_call") {
    state.provider_calls.push_back({e.at("identity").get<std::string>(),
                                    e.at("prompt").get<std::string>(),
                                    e.at("completion").get<std::string>(),
                                    e.value("at", std::string{})});
  } else if (type == "answer") {
    AnswerRecord r{e.at("article_id").get<std::string>(), e.at("node_id").get<std::string>(),
                   answer_from(e.at("answer").get<std::string>()),
                   e.value("annotator", std::string{}), e.value("at", std::string{})};
    state.answers[r.article_id].push_back(std::move(r));
  } else if (type == "evaluation") {
    EvaluationRecord r = evaluation_from_json(e.at("evaluation"));
    state.evaluations[r.article_id] = std::move(r);
  } else if (type == "features") {
    state.features[e.at("article_id").get<std::string>()] =
        incident_from_json(e.at("record"), schema);
  } else {
    throw Error(ErrorCode::kBadValue, "unknown entry type '" + type + "'");
  }
}

struct Replay {
  CorpusState state;
  std::uintmax_t valid_bytes = 0;  // prefix length worth keeping
  bool torn_tail = false;
  bool missing_newline = false;
};

Replay replay(const std::filesystem::path& path, const FeatureSchema& schema) {
  Replay r;
  std::ifstream in(path, std::ios::binary);
  if (!in) return r;
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    const bool last = end == std::string::npos || end + 1 >= text.size();
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const std::string_view line(text.data() + start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        apply(r.state, json::parse(line), schema);
      } catch (const std::exception& ex) {
        if (!last) {
          throw Error(ErrorCode::kCorruptEntry,
                      fmt::format("{}:{}: {}", path.string(), line_no, ex.what()));
        }
        r.state.warnings.push_back(fmt::format(
            "{}:{}: ignoring incomplete final entry ({})", path.string(), line_no, ex.what()));
        r.torn_tail = true;
        return r;
      }
    }
    r.valid_bytes = std::min(end + 1, text.size());
    r.missing_newline = end == text.size();
    start = end + 1;
  }
  return r;
}

}  // namespace

json article_to_json(const ArticleRecord& a) {
  json j = {{"article_id", a.article_id},
            {"title", a.title},
            {"body", a.body},
            {"source", a.source},
            {"url", a.url},
            {"publication_date", a.publication_date},
            {"retrieved_at", a.retrieved_at},
            {"matched_keywords", a.matched_keywords},
            {"status", article_status_name(a.status)}};
  j["relevance_score"] = a.relevance_score ? json(*a.relevance_score) : json(nullptr);
  return j;
}

ArticleRecord article_from_json(const json& j) {
  ArticleRecord a;
  a.article_id = j.at("article_id").get<std::string>();
  if (a.article_id.empty()) throw Error(ErrorCode::kBadValue, "empty article_id");
  a.title = j.value("title", std::string{});
  a.body = j.value("body", std::string{});
  a.source = j.value("source", std::string{});
  a.url = j.value("url", std::string{});
  a.publication_date = j.value("publication_date", std::string{});
  a.retrieved_at = j.value("retrieved_at", std::string{});
  a.matched_keywords = j.value("matched_keywords", std::vector<std::string>{});
  a.status = status_from(j.value("status", std::string{"pending"}));
  if (j.contains("relevance_score") && !j["relevance_score"].is_null()) {
    a.relevance_score = j["relevance_score"].get<double>();
  }
  return a;
}

json evaluation_to_json(const EvaluationRecord& r) {
  json answers = json::array();
  for (const auto& [node, a] : r.answers) answers.push_back({{"node_id", node}, {"answer", answer_name(a)}});
  json j = {{"article_id", r.article_id},
            {"answers", answers},
            {"score", r.score},
            {"threshold", r.threshold},
            {"classification", relevance_name(r.classification)},
            {"provider", r.provider},
            {"timestamp", r.at}};
  j["failure"] = r.failure ? json{{"node_id", r.failure->node_id}, {"message", r.failure->message}}
                           : json(nullptr);
  return j;
}

EvaluationRecord evaluation_from_json(const json& j) {
  EvaluationRecord r;
  r.article_id = j.at("article_id").get<std::string>();
  for (const auto& a : j.at("answers")) {
    r.answers.emplace_back(a.at("node_id").get<std::string>(),
                           answer_from(a.at("answer").get<std::string>()));
  }
  r.score = j.at("score").get<double>();
  r.threshold = j.at("threshold").get<double>();
  const auto cls = j.at("classification").get<std::string>();
  if (cls != "relevant" && cls != "irrelevant") {
    throw Error(ErrorCode::kBadValue, "bad classification '" + cls + "'");
  }
  r.classification = cls == "relevant" ? Relevance::kRelevant : Relevance::kIrrelevant;
  r.provider = j.value("provider", std::string{});
  r.at = j.value("timestamp", std::string{});
  if (j.contains("failure") && !j["failure"].is_null()) {
    r.failure = ProviderFailure{j["failure"].at("node_id").get<std::string>(),
                                j["failure"].at("message").get<std::string>()};
  }
  return r;
}

json incident_to_json(const IncidentRecord& r) {
  json values = json::object();
  for (const auto& [key, v] : r.values) {
    if (!is_missing(v)) values[key] = encode_value(v);
  }
  return {{"incident_id", r.incident_id},
          {"label", label_name(r.label)},
          {"source_article_ids", r.source_article_ids},
          {"values", values}};
}

IncidentRecord incident_from_json(const json& j, const FeatureSchema& schema) {
  IncidentRecord r;
  r.incident_id = j.value("incident_id", std::string{});
  const auto label = parse_label(j.value("label", std::string{"pos"}));
  if (!label) throw Error(ErrorCode::kBadValue, "label must be pos or neg");
  r.label = *label;
  r.source_article_ids = j.value("source_article_ids", std::vector<std::string>{});
  if (j.contains("values")) {
    for (const auto& [key, cell] : j.at("values").items()) {
      const FeatureSpec* spec = schema.find(key);
      if (!spec) throw Error(ErrorCode::kUnknownFeature, "unknown feature '" + key + "'");
      std::string text;
      if (cell.is_string()) {
        text = cell.get<std::string>();
      } else if (cell.is_number_integer()) {
        text = std::to_string(cell.get<std::int64_t>());
      } else if (cell.is_null()) {
        continue;
      } else {
        throw Error(ErrorCode::kBadValue, "feature '" + key + "' must be a string");
      }
      FeatureValue v = decode_value(*spec, text);
      if (!is_missing(v)) r.values[key] = std::move(v);
    }
  }
  return r;
}

EvaluationRecord make_evaluation_record(const QuestionTree& tree, const Evaluation& eval,
                                        double threshold, std::string provider, std::string at) {
  EvaluationRecord r;
  r.article_id = eval.article_id;
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    if (eval.nodes[i].asked()) r.answers.emplace_back(tree.node(i).id, *eval.nodes[i].answer);
  }
  r.score = relevance_score(tree, eval);
  r.threshold = threshold;
  r.classification = classify(r.score, threshold);
  r.provider = std::move(provider);
  r.at = std::move(at);
  r.failure = eval.failure;
  return r;
}

Evaluation evaluation_from_record(const QuestionTree& tree, const EvaluationRecord& record) {
  Evaluation eval = Evaluation::empty_for(tree, record.article_id);
  for (const auto& [node, a] : record.answers) {
    const auto idx = tree.index_of(node);
    if (!idx) throw Error(ErrorCode::kMismatchedTree, "unknown node '" + node + "'");
    eval.nodes[*idx] = NodeResult{NodeState::kAnswered, a};
  }
  eval.failure = record.failure;
  eligible_frontier(tree, eval);
  return eval;
}

const ArticleRecord* CorpusState::find(const std::string& article_id) const {
  auto it = index.find(article_id);
  return it == index.end() ? nullptr : &articles[it->second];
}

CorpusState load_corpus(const std::filesystem::path& path, const FeatureSchema& schema) {
  return replay(path, schema).state;
}

CorpusStore::CorpusStore(std::filesystem::path path, FeatureSchema schema)
    : path_(std::move(path)), schema_(std::move(schema)) {
  Replay r = replay(path_, schema_);
  if (r.torn_tail) {
    std::filesystem::resize_file(path_, r.valid_bytes);
    r.state.warnings.push_back(fmt::format("{}: truncated to {} bytes", path_.string(), r.valid_bytes));
    r.missing_newline = false;
  }
  if (r.missing_newline) {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out << '\n';
  }
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  state_ = std::move(r.state);
}

CorpusState CorpusStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return state_;
}

std::vector<std::string> CorpusStore::warnings() const {
  std::lock_guard lock(mutex_);
  return state_.warnings;
}

void CorpusStore::append_locked(const json& entry) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path_.string() + " for append");
  out << entry.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write to " + path_.string() + " failed");
  apply(state_, entry, schema_);
}

std::size_t CorpusStore::append_articles(const std::vector<ArticleRecord>& articles) {
  std::lock_guard lock(mutex_);
  std::size_t added = 0;
  for (const auto& a : articles) {
    if (state_.index.count(a.article_id)) continue;
    append_locked({{"type", "article"}, {"article", article_to_json(a)}});
    ++added;
  }
  return added;
}

void CorpusStore::update_status(const std::string& article_id, ArticleStatus status,
                                std::optional<double> relevance_score) {
  std::lock_guard lock(mutex_);
  const ArticleRecord* a = state_.find(article_id);
  if (!a) throw Error(ErrorCode::kInvalidTransition, "unknown article " + article_id);
  if (!status_transition_allowed(a->status, status)) {
    throw Error(ErrorCode::kInvalidTransition,
                fmt::format("{}: {} -> {}", article_id, article_status_name(a->status),
                            article_status_name(status)));
  }
  json e = {{"type", "status"}, {"article_id", article_id}, {"status", article_status_name(status)}};
  if (relevance_score) e["relevance_score"] = *relevance_score;
  append_locked(e);
}

void CorpusStore::record_provider_call(const ProviderCallRecord& call) {
  std::lock_guard lock(mutex_);
  append_locked({{"type", "provider_call"},
                 {"identity", call.identity},
                 {"prompt", call.prompt},
                 {"completion", call.completion},
                 {"at", call.at}});
}

void CorpusStore::record_answer(const AnswerRecord& r) {
  std::lock_guard lock(mutex_);
  append_locked({{"type", "answer"},
                 {"article_id", r.article_id},
                 {"node_id", r.node_id},
                 {"answer", answer_name(r.answer)},
                 {"annotator", r.annotator},
                 {"at", r.at}});
}

void CorpusStore::record_evaluation(const EvaluationRecord& r) {
  std::lock_guard lock(mutex_);
  append_locked({{"type", "evaluation"}, {"evaluation", evaluation_to_json(r)}});
}

void CorpusStore::record_features(const std::string& article_id, const IncidentRecord& record) {
  std::lock_guard lock(mutex_);
  append_locked({{"type", "features"}, {"article_id", article_id}, {"record", incident_to_json(record)}});
}

std::optional<ArticleRecord> CorpusStore::article(const std::string& article_id) const {
  std::lock_guard lock(mutex_);
  const ArticleRecord* a = state_.find(article_id);
  return a ? std::optional<ArticleRecord>(*a) : std::nullopt;
}

std::vector<ArticleRecord> CorpusStore::articles(std::optional<ArticleStatus> status) const {
  std::lock_guard lock(mutex_);
  std::vector<ArticleRecord> out;
  for (const auto& a : state_.articles) {
    if (!status || a.status == *status) out.push_back(a);
  }
  return out;
}

}  // namespace flminer
