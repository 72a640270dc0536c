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

#include "cli.hpp"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "flminer/annotation_service.hpp"
#include "flminer/corpus_store.hpp"
#include "flminer/error.hpp"
#include "flminer/feature_model.hpp"
#include "flminer/formula_miner.hpp"
#include "flminer/ingest.hpp"
#include "flminer/mltl.hpp"
#include "flminer/providers.hpp"
#include "flminer/qtree.hpp"
#include "flminer/report.hpp"
#include "flminer/temporal_miner.hpp"

namespace flminer::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Completion used when no text-model endpoint is configured.
constexpr const char* kStubKeywordCompletion =
    "forced labour\n"
    "debt bondage\n"
    "child labor\n"
    "human trafficking\n"
    "withhold release order\n"
    "prison labor\n"
    "modern slavery\n";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Write to a sibling temp file, then rename over the target.
void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

struct Context {
  Config config;
  std::ostream& out;
  std::ostream& err;

  Clock clock() const {
    if (!config.fixed_time.empty()) {
      return [t = config.fixed_time] { return t; };
    }
    return utc_now;
  }

  QuestionTree tree() const {
    QuestionTree t = config.paths.tree.empty() ? QuestionTree::default_tree()
                                               : QuestionTree::from_json(read_file(config.paths.tree));
    if (auto problems = validate_tree(t); !problems.empty()) {
      throw Error(ErrorCode::kInvalidTree, problems.front());
    }
    return t;
  }

  FeatureSchema schema() const {
    return config.paths.schema.empty() ? FeatureSchema::default_schema()
                                       : FeatureSchema::from_json(read_file(config.paths.schema));
  }

  std::vector<fs::path> optional_inputs() const {
    std::vector<fs::path> files;
    if (!config.paths.tree.empty()) files.push_back(config.paths.tree);
    if (!config.paths.schema.empty()) files.push_back(config.paths.schema);
    return files;
  }

  void require(std::vector<fs::path> files) const {
    for (auto& f : optional_inputs()) files.push_back(f);
    require_files(files);
  }

  std::unique_ptr<TextModelProvider> text_model() const {
    if (config.text_model.endpoint.empty()) {
      return std::make_unique<StubTextModel>(kStubKeywordCompletion);
    }
    return std::make_unique<HttpTextModel>(HttpEndpoint{
        config.text_model.endpoint, config.text_model.credential_env,
        config.text_model.timeout_seconds});
  }

  fs::path report(std::string_view name) const { return config.paths.reports / std::string(name); }
};

ProviderCallSink sink_for(CorpusStore& store, const Clock& clock, const std::string& identity) {
  return [&store, clock, identity](const std::string&, std::string_view prompt,
                                   std::string_view completion) {
    store.record_provider_call({identity, std::string(prompt), std::string(completion), clock()});
  };
}

std::vector<std::string> read_keywords(const fs::path& path) {
  std::vector<std::string> terms;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) terms.push_back(line);
  }
  return terms;
}

void cmd_keywords(const Context& ctx) {
  ctx.require({});
  const auto clock = ctx.clock();
  CorpusStore store(ctx.config.paths.corpus, ctx.schema());
  auto model = ctx.text_model();
  RecordingTextModel recorded(*model, sink_for(store, clock, model->identity()));
  const auto phrases =
      generate_keywords(recorded, ctx.config.keywords.seed_topic, ctx.config.keywords.count);
  std::string text;
  for (const auto& p : phrases) text += p + "\n";
  write_file(ctx.config.paths.keywords, text);
  ctx.out << text;
}

void cmd_fetch(const Context& ctx) {
  ctx.require({});
  const auto& ns = ctx.config.news_search;
  KeywordQuery query;
  if (fs::exists(ctx.config.paths.keywords)) query.terms = read_keywords(ctx.config.paths.keywords);
  query.date_from = ns.date_from;
  query.date_to = ns.date_to;
  query.page_size = ns.page_size;
  query.max_results = ns.max_results;
  validate_query(query);

  CorpusStore store(ctx.config.paths.corpus, ctx.schema());
  for (const auto& w : store.warnings()) ctx.err << "warning: " << w << "\n";
  HttpNewsSearchClient client(
      HttpEndpoint{ns.endpoint, ns.credential_env, ctx.config.text_model.timeout_seconds},
      std::make_shared<RateLimiter>(ns.rate_limit_rps),
      RetryPolicy{ns.max_retries, std::chrono::milliseconds(ns.backoff_ms)});
  const FetchResult result = fetch_articles(client, query, ctx.clock());
  for (const auto& w : result.warnings) ctx.err << "warning: " << w << "\n";
  const auto unique = dedup_corpus(result.articles);
  const std::size_t added = store.append_articles(unique);
  ctx.out << fmt::format("fetched {} articles ({} unique, {} new) in {} requests\n",
                         result.articles.size(), unique.size(), added, result.requests);
}

void write_incidents(const Context& ctx, const CorpusState& state, const FeatureSchema& schema) {
  LabeledDataset ds{schema, {}};
  for (const auto& a : state.articles) {
    if (auto it = state.features.find(a.article_id); it != state.features.end()) {
      ds.records.push_back(it->second);
    }
  }
  write_file(ctx.config.paths.incidents, write_incident_csv(ds));
}

void cmd_score(const Context& ctx) {
  ctx.require({ctx.config.paths.corpus});
  const QuestionTree tree = ctx.tree();
  const FeatureSchema schema = ctx.schema();
  const auto clock = ctx.clock();
  CorpusStore store(ctx.config.paths.corpus, schema);
  for (const auto& w : store.warnings()) ctx.err << "warning: " << w << "\n";

  std::unique_ptr<TextModelProvider> model;
  std::unique_ptr<RecordingTextModel> recorded;
  std::unique_ptr<AnswerProvider> provider;
  if (ctx.config.qtree.provider == "text_model") {
    model = ctx.text_model();
    recorded = std::make_unique<RecordingTextModel>(*model, sink_for(store, clock, model->identity()));
    provider = std::make_unique<TextModelAnswerProvider>(*recorded);
  } else {
    provider = std::make_unique<KeywordAnswerProvider>(KeywordAnswerProvider::for_tree(tree));
  }

  std::size_t relevant = 0, irrelevant = 0, failed = 0;
  for (const auto& article : store.articles(ArticleStatus::kPending)) {
    const Evaluation eval = evaluate(tree, *provider, article);
    const EvaluationRecord rec = make_evaluation_record(tree, eval, ctx.config.qtree.threshold,
                                                        provider->identity(), clock());
    store.record_evaluation(rec);
    if (eval.failure) {
      ++failed;
      ctx.err << fmt::format("warning: {}: provider failed at {}: {}\n", article.article_id,
                             eval.failure->node_id, eval.failure->message);
      continue;
    }
    const bool is_relevant = rec.classification == Relevance::kRelevant;
    (is_relevant ? relevant : irrelevant)++;
    store.record_features(article.article_id,
                          extract_features(*provider, article, schema,
                                           is_relevant ? Label::kPositive : Label::kNegative));
    store.update_status(article.article_id, ArticleStatus::kScored, rec.score);
  }

  const CorpusState state = store.snapshot();
  write_incidents(ctx, state, schema);
  std::vector<EvaluationRecord> evals;
  for (const auto& a : state.articles) {
    if (auto it = state.evaluations.find(a.article_id); it != state.evaluations.end()) {
      evals.push_back(it->second);
    }
  }
  write_file(ctx.report("scores.jsonl"), evaluations_jsonl(evals));
  ctx.out << fmt::format("scored {} articles: {} relevant, {} irrelevant, {} failed\n",
                         relevant + irrelevant + failed, relevant, irrelevant, failed);
}

void cmd_booleanize(const Context& ctx) {
  ctx.require({ctx.config.paths.incidents});
  const LabeledDataset ds = parse_incident_csv(read_file(ctx.config.paths.incidents), ctx.schema());
  for (const auto& v : validate_dataset(ds)) {
    ctx.err << fmt::format("warning: {}: {}\n", v.key, v.rule);
  }
  const BooleanizedDataset b = booleanize(ds);
  write_file(ctx.config.paths.booleanized, write_booleanized_csv(b));
  ctx.out << fmt::format("booleanized {} incidents into {} variables\n", b.rows.size(),
                         b.variables.size());
}

void cmd_mine(const Context& ctx) {
  ctx.require({ctx.config.paths.booleanized});
  const BooleanizedDataset data = parse_booleanized_csv(read_file(ctx.config.paths.booleanized));
  const auto ranked =
      mine(ctx.config.mining.enumeration, data, ctx.config.mining.top_k, ctx.config.workers);
  write_file(ctx.report("mining.tsv"), mining_report_tsv(ranked));
  write_file(ctx.report("mining.json"), mining_report_json(ranked).dump(2) + "\n");
  for (std::size_t i = 0; i < ranked.size() && i < 5; ++i) {
    ctx.out << fmt::format("{}\tj={}\t{}\n", i + 1, format_rate(ranked[i].stats.j), ranked[i].text);
  }
}

void cmd_temporal(const Context& ctx) {
  ctx.require({ctx.config.paths.traces});
  const auto traces = parse_traces_jsonl(read_file(ctx.config.paths.traces));
  const auto ranked =
      mine_temporal(ctx.config.temporal.config, traces, ctx.config.temporal.top_k, ctx.config.workers);
  write_file(ctx.report("temporal.tsv"), temporal_report_tsv(ranked));
  write_file(ctx.report("temporal.json"), temporal_report_json(ranked).dump(2) + "\n");
  for (std::size_t i = 0; i < ranked.size() && i < 5; ++i) {
    ctx.out << fmt::format("{}\tj={}\t{}\n", i + 1, format_rate(ranked[i].stats.j), ranked[i].text);
  }
}

void cmd_report(const Context& ctx) {
  ctx.require({ctx.config.paths.incidents});
  const LabeledDataset ds = parse_incident_csv(read_file(ctx.config.paths.incidents), ctx.schema());
  const std::string text = dataset_summary_markdown(summarize_dataset(ds));
  write_file(ctx.report("summary.md"), text);
  ctx.out << text;
}

std::atomic<bool> g_stop{false};

void wait_for_signal() {
  g_stop = false;
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

void cmd_serve(const Context& ctx) {
  ctx.require({ctx.config.paths.corpus});
  CorpusStore store(ctx.config.paths.corpus, ctx.schema());
  for (const auto& w : store.warnings()) ctx.err << "warning: " << w << "\n";
  ServiceOptions options;
  options.threshold = ctx.config.qtree.threshold;
  options.default_annotator = ctx.config.service.annotator;
  options.static_dir = ctx.config.service.static_dir;
  options.clock = ctx.clock();
  AnnotationService service(ctx.tree(), store, ctx.schema(), options);
  const int port = service.start(ctx.config.service.host, ctx.config.service.port);
  ctx.out << fmt::format("serving annotation API on http://{}:{}\n", ctx.config.service.host, port)
          << std::flush;
  wait_for_signal();
  service.stop();
}

void cmd_fake_news(const Context& ctx) {
  const auto& f = ctx.config.fake_news;
  std::string token;
  if (!f.token_env.empty()) {
    const char* v = std::getenv(f.token_env.c_str());
    if (!v || !*v) throw Error(ErrorCode::kAuthFailure, f.token_env + " is not set");
    token = v;
  }
  FakeNewsServer server(generate_fake_corpus({ctx.config.seed, f.size}), token);
  const int port = server.start(f.host, f.port);
  ctx.out << fmt::format("serving fake news search on http://{}:{}\n", f.host, port) << std::flush;
  wait_for_signal();
  server.stop();
}

// Positive traces recruit and then work within a few steps; negatives
// recruit without a timely start or never recruit.
std::vector<Trace> synthetic_traces(std::uint64_t seed, std::size_t count, std::size_t length) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const std::vector<std::string> vars = {"recruited", "working", "paid", "relocated"};
  std::vector<Trace> out;
  for (std::size_t k = 0; k < count; ++k) {
    Trace t;
    t.trace_id = fmt::format("t{:03d}", k);
    t.label = k % 2 == 0 ? Label::kPositive : Label::kNegative;
    t.vars = vars;
    t.steps.assign(length, std::vector<bool>(vars.size(), false));
    const std::size_t r = pick(length / 2);
    const bool pos = t.label == Label::kPositive;
    if (pos || pick(2) == 0) t.steps[r][0] = true;
    const std::size_t delay = pos ? 1 + pick(3) : 5 + pick(length / 2);
    for (std::size_t s = r + delay; s < length; ++s) t.steps[s][1] = true;
    for (std::size_t s = 0; s < length; ++s) {
      t.steps[s][2] = pick(3) == 0;
      t.steps[s][3] = pos ? s == r + 1 : pick(4) == 0;
    }
    out.push_back(std::move(t));
  }
  return out;
}

void cmd_fake_traces(const Context& ctx, std::size_t count, std::size_t length) {
  if (length < 4) throw Error(ErrorCode::kInvalidConfig, "trace length must be >= 4");
  write_file(ctx.config.paths.traces,
             write_traces_jsonl(synthetic_traces(ctx.config.seed, count, length)));
  ctx.out << fmt::format("wrote {} traces to {}\n", count, ctx.config.paths.traces.string());
}

void cmd_validate(const Context& ctx) {
  ctx.require({});
  const QuestionTree tree = ctx.tree();
  const FeatureSchema schema = ctx.schema();
  std::size_t problems = 0;
  if (fs::exists(ctx.config.paths.corpus)) {
    const CorpusState state = load_corpus(ctx.config.paths.corpus, schema);
    for (const auto& w : state.warnings) ctx.err << "warning: " << w << "\n";
    ctx.out << fmt::format("corpus: {} articles\n", state.articles.size());
  }
  if (fs::exists(ctx.config.paths.incidents)) {
    const LabeledDataset ds = parse_incident_csv(read_file(ctx.config.paths.incidents), schema);
    for (const auto& v : validate_dataset(ds)) {
      ctx.out << fmt::format("violation: {}: {}\n", v.key, v.rule);
      ++problems;
    }
    ctx.out << fmt::format("incidents: {} records\n", ds.records.size());
  }
  ctx.out << fmt::format("tree: {} nodes; schema: {} features\n", tree.size(),
                         schema.features().size());
  if (problems > 0) {
    throw Error(ErrorCode::kInvalidSchema, fmt::format("{} validation violation(s)", problems));
  }
}

bool is_override(const std::string& arg) {
  if (!arg.starts_with("--")) return false;
  const auto eq = arg.find('=');
  if (eq == std::string::npos) return false;
  const std::string key = arg.substr(2, eq - 2);
  return key.find('.') != std::string::npos || key == "seed" || key == "fixed_time" ||
         key == "workers";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feature-logic mining over forced-labor news reporting", "flminer"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  app.add_option("--config", config_path, "Configuration file (JSON)");
  app.add_option("--seed", seed, "Seed for every randomized choice");
  app.add_option("--workers", workers, "Worker threads for mining");
  app.footer("Any configuration field can be overridden with --dotted.key=value.");

  std::size_t trace_count = 40, trace_length = 12;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"keywords", "Generate search keywords with the text model"},
      {"fetch", "Fetch articles from the news-search endpoint into the corpus"},
      {"score", "Score pending articles with the question tree and extract features"},
      {"booleanize", "Turn the incident table into Boolean variables"},
      {"mine", "Rank propositional formulas by Youden's J"},
      {"temporal", "Rank bounded temporal formulas over traces"},
      {"report", "Summarize the incident table"},
      {"serve", "Run the annotation HTTP API"},
      {"fake-news", "Run the built-in fake news-search server"},
      {"fake-traces", "Write synthetic labeled traces"},
      {"validate", "Check configuration and inputs"},
      {"config", "Print the effective configuration"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    if (name == "fake-traces") {
      sub->add_option("--count", trace_count, "Number of traces");
      sub->add_option("--length", trace_length, "Steps per trace");
    }
  }

  std::vector<std::string> overrides;
  std::vector<std::string> rest;
  for (const auto& a : args) {
    if (is_override(a)) {
      overrides.push_back(a.substr(2));
    } else {
      rest.push_back(a);
    }
  }

  try {
    std::vector<std::string> reversed(rest.rbegin(), rest.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::string stage = "config";
  for (const auto* sub : app.get_subcommands()) stage = sub->get_name();
  try {
    if (seed) overrides.push_back(fmt::format("seed={}", *seed));
    if (workers) overrides.push_back(fmt::format("workers={}", *workers));
    Context ctx{load_config(config_path, overrides), out, err};
    if (stage == "keywords") cmd_keywords(ctx);
    else if (stage == "fetch") cmd_fetch(ctx);
    else if (stage == "score") cmd_score(ctx);
    else if (stage == "booleanize") cmd_booleanize(ctx);
    else if (stage == "mine") cmd_mine(ctx);
    else if (stage == "temporal") cmd_temporal(ctx);
    else if (stage == "report") cmd_report(ctx);
    else if (stage == "serve") cmd_serve(ctx);
    else if (stage == "fake-news") cmd_fake_news(ctx);
    else if (stage == "fake-traces") cmd_fake_traces(ctx, trace_count, trace_length);
    else if (stage == "validate") cmd_validate(ctx);
    else if (stage == "config") out << config_to_json(ctx.config).dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    err << fmt::format("error: code={} stage={} message={}\n", error_code_name(e.code()), stage,
                       quote(e.what()));
  } catch (const std::exception& e) {
    err << fmt::format("error: code=Internal stage={} message={}\n", stage, quote(e.what()));
  }
  return 1;
}

}  // namespace flminer::cli
