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

// Generators and brute-force oracles shared by the unit and acceptance tests.
// The oracles deliberately use their own node types and recursion so that
// they do not share code paths with the library evaluators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flminer/feature_model.hpp"
#include "flminer/formula.hpp"
#include "flminer/mltl.hpp"
#include "flminer/qtree.hpp"

namespace flminer::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool coin(double p = 0.5) { return std::uniform_real_distribution<double>(0, 1)(engine_) < p; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::string> var_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

// ---- propositional oracle -------------------------------------------------

struct ONode {
  enum Kind { kVar, kNot, kAnd, kOr, kImp } kind;
  std::size_t var = 0;
  std::shared_ptr<ONode> l, r;
};

inline bool oracle_eval(const ONode& n, const std::vector<bool>& a) {
  switch (n.kind) {
    case ONode::kVar: return a[n.var];
    case ONode::kNot: return !oracle_eval(*n.l, a);
    case ONode::kAnd: return oracle_eval(*n.l, a) ? oracle_eval(*n.r, a) : false;
    case ONode::kOr: return oracle_eval(*n.l, a) ? true : oracle_eval(*n.r, a);
    case ONode::kImp: return oracle_eval(*n.l, a) ? oracle_eval(*n.r, a) : true;
  }
  return false;
}

struct RandomBool {
  BoolFormula formula;
  std::shared_ptr<ONode> oracle;
};

inline RandomBool random_bool(Rng& rng, const std::vector<std::string>& vars, std::size_t depth,
                              bool allow_implies = true) {
  if (depth == 0 || rng.below(4) == 0) {
    const std::size_t v = rng.below(vars.size());
    return {BoolFormula::var(vars[v]), std::make_shared<ONode>(ONode{ONode::kVar, v, {}, {}})};
  }
  const std::size_t pick = rng.below(allow_implies ? 4 : 3);
  if (pick == 0) {
    auto c = random_bool(rng, vars, depth - 1, allow_implies);
    return {BoolFormula::negate(c.formula), std::make_shared<ONode>(ONode{ONode::kNot, 0, c.oracle, {}})};
  }
  auto l = random_bool(rng, vars, depth - 1, allow_implies);
  auto r = random_bool(rng, vars, depth - 1, allow_implies);
  switch (pick) {
    case 1:
      return {BoolFormula::conj(l.formula, r.formula),
              std::make_shared<ONode>(ONode{ONode::kAnd, 0, l.oracle, r.oracle})};
    case 2:
      return {BoolFormula::disj(l.formula, r.formula),
              std::make_shared<ONode>(ONode{ONode::kOr, 0, l.oracle, r.oracle})};
    default:
      return {BoolFormula::implies(l.formula, r.formula),
              std::make_shared<ONode>(ONode{ONode::kImp, 0, l.oracle, r.oracle})};
  }
}

/// Truth table over `vars` (first variable most significant) by enumerating
/// every assignment through eval_formula.
inline std::vector<bool> brute_table(const BoolFormula& f, const std::vector<std::string>& vars) {
  std::vector<bool> bits;
  for (std::size_t m = 0; m < (std::size_t{1} << vars.size()); ++m) {
    std::map<std::string, bool, std::less<>> a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = (m >> (vars.size() - 1 - i)) & 1U;
    bits.push_back(eval_formula(f, a));
  }
  return bits;
}

/// Minimal AST size of every Boolean function of `n` variables (n <= 3)
/// reachable with !, &, | within `max_size`; 0 for unreachable tables.
/// Works on function sets level by level, so it is exhaustive without
/// listing formulas.
inline std::vector<std::size_t> min_sizes(std::size_t n, std::size_t max_size) {
  const std::size_t bits = std::size_t{1} << n;
  const std::size_t tables = std::size_t{1} << bits;
  const std::uint32_t mask = static_cast<std::uint32_t>(tables - 1);
  std::vector<std::size_t> best(tables, 0);
  std::vector<std::vector<std::uint32_t>> by_size(max_size + 1);
  auto reach = [&](std::uint32_t t, std::size_t size) {
    if (best[t] == 0) {
      best[t] = size;
      by_size[size].push_back(t);
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    std::uint32_t t = 0;
    for (std::size_t m = 0; m < bits; ++m) {
      if ((m >> (n - 1 - v)) & 1U) t |= 1U << m;
    }
    reach(t, 1);
  }
  for (std::size_t size = 2; size <= max_size; ++size) {
    for (std::uint32_t t : by_size[size - 1]) reach(~t & mask, size);
    for (std::size_t left = 1; left + 1 < size; ++left) {
      const std::size_t right = size - 1 - left;
      for (std::uint32_t a : by_size[left]) {
        for (std::uint32_t b : by_size[right]) {
          reach(a & b, size);
          reach(a | b, size);
        }
      }
    }
  }
  return best;
}

/// Brute-force confusion counts: rows with a missing variable of `f` are
/// skipped, the rest are evaluated with eval_formula.
struct BruteCounts {
  std::size_t pos_sat = 0, pos_unsat = 0, neg_sat = 0, neg_unsat = 0, pos_skip = 0, neg_skip = 0;
};

inline BruteCounts brute_counts(const BoolFormula& f, const BooleanizedDataset& d) {
  BruteCounts c;
  const auto vars = f.variables();
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    const bool pos = d.labels[r] == Label::kPositive;
    std::map<std::string, bool, std::less<>> a;
    bool skip = false;
    for (const auto& v : vars) {
      const Cell cell = d.rows[r][*d.variable_index(v)];
      if (cell == Cell::kMissing) skip = true;
      a[v] = cell == Cell::kTrue;
    }
    if (skip) {
      (pos ? c.pos_skip : c.neg_skip)++;
    } else if (eval_formula(f, a)) {
      (pos ? c.pos_sat : c.neg_sat)++;
    } else {
      (pos ? c.pos_unsat : c.neg_unsat)++;
    }
  }
  return c;
}

// ---- temporal oracle ------------------------------------------------------

struct TNode {
  enum Kind { kAtom, kNot, kAnd, kOr, kImp, kF, kG, kU } kind;
  std::size_t var = 0;
  std::size_t lo = 0, hi = 0;
  std::shared_ptr<TNode> l, r;
};

// Definitions straight from the quantifier form of the finite-trace semantics.
inline bool oracle_eval(const TNode& n, const std::vector<std::vector<bool>>& steps, std::size_t i) {
  const std::size_t len = steps.size();
  auto window = [&](std::size_t j) { return j >= i + n.lo && j <= i + n.hi && j < len; };
  switch (n.kind) {
    case TNode::kAtom: return steps[i][n.var];
    case TNode::kNot: return !oracle_eval(*n.l, steps, i);
    case TNode::kAnd: return oracle_eval(*n.l, steps, i) && oracle_eval(*n.r, steps, i);
    case TNode::kOr: return oracle_eval(*n.l, steps, i) || oracle_eval(*n.r, steps, i);
    case TNode::kImp: return !oracle_eval(*n.l, steps, i) || oracle_eval(*n.r, steps, i);
    case TNode::kF: {
      bool any = false;
      for (std::size_t j = 0; j < len; ++j) any = any || (window(j) && oracle_eval(*n.l, steps, j));
      return any;
    }
    case TNode::kG: {
      bool all = true;
      for (std::size_t j = 0; j < len; ++j) all = all && (!window(j) || oracle_eval(*n.l, steps, j));
      return all;
    }
    case TNode::kU: {
      for (std::size_t j = 0; j < len; ++j) {
        if (!window(j) || !oracle_eval(*n.r, steps, j)) continue;
        bool hold = true;
        for (std::size_t k = i + n.lo; k < j; ++k) hold = hold && oracle_eval(*n.l, steps, k);
        if (hold) return true;
      }
      return false;
    }
  }
  return false;
}

struct RandomMltl {
  MltlFormula formula;
  std::shared_ptr<TNode> oracle;
};

inline RandomMltl random_mltl(Rng& rng, const std::vector<std::string>& vars, std::size_t depth,
                              std::size_t max_bound) {
  if (depth == 0 || rng.below(4) == 0) {
    const std::size_t v = rng.below(vars.size());
    return {MltlFormula::atom(vars[v]), std::make_shared<TNode>(TNode{TNode::kAtom, v, 0, 0, {}, {}})};
  }
  const std::size_t pick = rng.below(8);
  std::size_t lo = rng.below(max_bound + 1);
  std::size_t hi = lo + rng.below(max_bound + 1);
  if (pick == 0 || pick == 5 || pick == 6) {
    auto c = random_mltl(rng, vars, depth - 1, max_bound);
    if (pick == 0) {
      return {MltlFormula::negate(c.formula), std::make_shared<TNode>(TNode{TNode::kNot, 0, 0, 0, c.oracle, {}})};
    }
    if (pick == 5) {
      return {MltlFormula::finally(lo, hi, c.formula),
              std::make_shared<TNode>(TNode{TNode::kF, 0, lo, hi, c.oracle, {}})};
    }
    return {MltlFormula::globally(lo, hi, c.formula),
            std::make_shared<TNode>(TNode{TNode::kG, 0, lo, hi, c.oracle, {}})};
  }
  auto l = random_mltl(rng, vars, depth - 1, max_bound);
  auto r = random_mltl(rng, vars, depth - 1, max_bound);
  switch (pick) {
    case 1:
      return {MltlFormula::conj(l.formula, r.formula),
              std::make_shared<TNode>(TNode{TNode::kAnd, 0, 0, 0, l.oracle, r.oracle})};
    case 2:
      return {MltlFormula::disj(l.formula, r.formula),
              std::make_shared<TNode>(TNode{TNode::kOr, 0, 0, 0, l.oracle, r.oracle})};
    case 3:
      return {MltlFormula::implies(l.formula, r.formula),
              std::make_shared<TNode>(TNode{TNode::kImp, 0, 0, 0, l.oracle, r.oracle})};
    default:
      return {MltlFormula::until(lo, hi, l.formula, r.formula),
              std::make_shared<TNode>(TNode{TNode::kU, 0, lo, hi, l.oracle, r.oracle})};
  }
}

inline Trace random_trace(Rng& rng, const std::vector<std::string>& vars, std::size_t len,
                          Label label = Label::kPositive, double density = 0.4,
                          std::string id = "t") {
  Trace t{std::move(id), label, vars, {}};
  t.steps.assign(len, std::vector<bool>(vars.size(), false));
  for (auto& step : t.steps) {
    for (std::size_t v = 0; v < vars.size(); ++v) step[v] = rng.coin(density);
  }
  return t;
}

/// Least t with eval_response true, searched upward; nullopt when none up to
/// the trace length works.
inline std::optional<std::size_t> brute_min_t(const Trace& t, const std::string& a,
                                              const std::string& c) {
  for (std::size_t k = 0; k <= t.length(); ++k) {
    if (eval_response(t, a, c, k)) return k;
  }
  return std::nullopt;
}

// ---- question trees -------------------------------------------------------

/// Random single-rooted DAG: node k > 0 picks 1..3 parents among earlier nodes.
inline QuestionTree random_tree(Rng& rng, std::size_t n, bool random_weights = true) {
  std::vector<QuestionNode> nodes;
  for (std::size_t k = 0; k < n; ++k) {
    QuestionNode q;
    q.id = "n" + std::to_string(k);
    q.text = "question " + std::to_string(k);
    q.weight = random_weights ? 0.25 * static_cast<double>(1 + rng.below(8)) : 1.0;
    if (k > 0) {
      const std::size_t parents = 1 + rng.below(std::min<std::size_t>(3, k));
      for (std::size_t p = 0; p < parents; ++p) {
        std::string pid = "n" + std::to_string(rng.below(k));
        if (std::find(q.parents.begin(), q.parents.end(), pid) == q.parents.end()) {
          q.parents.push_back(pid);
        }
      }
    }
    nodes.push_back(std::move(q));
  }
  // Shuffle file order so that topological order differs from index order.
  std::shuffle(nodes.begin(), nodes.end(), rng.engine());
  return QuestionTree(std::move(nodes));
}

/// Provider answering from a fixed map with a default of no.
class MapProvider : public AnswerProvider {
 public:
  explicit MapProvider(std::map<std::string, Answer, std::less<>> answers)
      : answers_(std::move(answers)) {}
  Answer answer(const ArticleRecord&, std::string_view, std::string_view node_id) override {
    auto it = answers_.find(node_id);
    return it == answers_.end() ? Answer::kNo : it->second;
  }
  std::string identity() const override { return "map"; }

 private:
  std::map<std::string, Answer, std::less<>> answers_;
};

inline std::map<std::string, Answer, std::less<>> random_answers(Rng& rng, const QuestionTree& t,
                                                                 double p_yes) {
  std::map<std::string, Answer, std::less<>> m;
  for (const auto& n : t.nodes()) m[n.id] = rng.coin(p_yes) ? Answer::kYes : Answer::kNo;
  return m;
}

inline std::vector<bool> asked_set(const Evaluation& e) {
  std::vector<bool> out;
  for (const auto& n : e.nodes) out.push_back(n.asked());
  return out;
}

inline FrontierPicker random_picker(Rng& rng) {
  return [&rng](const std::vector<std::size_t>& frontier) { return rng.below(frontier.size()); };
}

/// Checks every question-tree law on one random tree; returns a description
/// of the first failure or an empty string.
inline std::string check_tree_laws(Rng& rng, std::size_t n_nodes) {
  const QuestionTree tree = random_tree(rng, n_nodes);
  if (!validate_tree(tree).empty()) return "generator produced an invalid tree";
  const ArticleRecord article{};
  const std::string root = tree.node(tree.topological_order().front()).id;

  // Root answered no.
  {
    auto answers = random_answers(rng, tree, 0.7);
    answers[root] = Answer::kNo;
    MapProvider p(answers);
    const auto e = evaluate(tree, p, article);
    if (relevance_score(tree, e) != 0.0) return "root-no score is not 0";
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (tree.node(i).id != root && e.nodes[i].asked()) return "root-no asked a non-root node";
    }
  }
  // Everything yes.
  {
    MapProvider p(random_answers(rng, tree, 1.0));
    const auto e = evaluate(tree, p, article, random_picker(rng));
    if (relevance_score(tree, e) != 1.0) return "all-yes score is not 1";
  }
  const auto answers = random_answers(rng, tree, 0.6);
  MapProvider provider(answers);
  const Evaluation base = evaluate(tree, provider, article);
  const double score = relevance_score(tree, base);
  if (score < 0.0 || score > 1.0) return "score outside [0,1]";
  if ((score == 1.0) != std::all_of(base.nodes.begin(), base.nodes.end(), [](const NodeResult& r) {
        return r.answer == Answer::kYes;
      })) {
    return "score == 1 does not coincide with all-yes";
  }
  // Frontier-order independence.
  for (int k = 0; k < 3; ++k) {
    if (evaluate(tree, provider, article, random_picker(rng)) != base) return "frontier order changed the evaluation";
  }
  // Uniform weights: score equals the yes fraction exactly.
  {
    std::vector<QuestionNode> nodes = tree.nodes();
    const double w = 0.25 * static_cast<double>(1 + rng.below(12));
    for (auto& n : nodes) n.weight = w;
    const QuestionTree uniform(nodes);
    const auto e = evaluate(uniform, provider, article);
    std::size_t yes = 0;
    for (const auto& r : e.nodes) yes += r.answer == Answer::kYes ? 1 : 0;
    if (relevance_score(uniform, e) != static_cast<double>(yes) / static_cast<double>(nodes.size())) {
      return "uniform-weight score differs from the yes fraction";
    }
    if (asked_set(e) != asked_set(base)) return "weights changed the asked set";
  }
  // Prune monotonicity: flipping a no to yes never shrinks the asked set.
  for (const auto& [id, a] : answers) {
    if (a != Answer::kNo) continue;
    auto flipped = answers;
    flipped[id] = Answer::kYes;
    MapProvider p(flipped);
    const auto after = asked_set(evaluate(tree, p, article));
    const auto before = asked_set(base);
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (before[i] && !after[i]) return "flipping " + id + " to yes removed an asked node";
    }
  }
  return {};
}

// ---- Booleanized datasets -------------------------------------------------

inline BooleanizedDataset random_booleanized(Rng& rng, std::size_t vars, std::size_t rows,
                                             double missing_rate) {
  BooleanizedDataset d;
  d.variables = var_names(vars);
  for (std::size_t r = 0; r < rows; ++r) {
    d.incident_ids.push_back("r" + std::to_string(r));
    d.labels.push_back(r % 2 == 0 || rng.coin(0.3) ? Label::kPositive : Label::kNegative);
    std::vector<Cell> row;
    for (std::size_t v = 0; v < vars; ++v) {
      row.push_back(rng.coin(missing_rate) ? Cell::kMissing : rng.coin() ? Cell::kTrue : Cell::kFalse);
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

/// Two-pass 2-sigma rule with the sample standard deviation, exact: with
/// d_i = n x_i - sum, the test |x - mean| > 2 sd becomes
/// d^2 (n - 1) > 4 sum(d_i^2). Values must stay small (|x| < 2^31).
inline std::vector<bool> brute_outliers(const std::vector<std::optional<std::int64_t>>& column) {
  using i128 = __int128;
  i128 sum = 0;
  i128 n = 0;
  for (const auto& v : column) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  std::vector<bool> out(column.size(), false);
  if (n < 2) return out;
  i128 dev2 = 0;
  for (const auto& v : column) {
    if (v) dev2 += (n * *v - sum) * (n * *v - sum);
  }
  if (dev2 == 0) return out;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!column[i]) continue;
    const i128 d = n * *column[i] - sum;
    out[i] = d * d * (n - 1) > 4 * dev2;
  }
  return out;
}

}  // namespace flminer::testing
