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

#include <set>

#include "flminer/error.hpp"
#include "flminer/formula_miner.hpp"
#include "support.hpp"

namespace flminer {
namespace {

using testing::Rng;

EnumerationConfig config(std::size_t vars, std::size_t max_size, std::size_t max_vars = 3) {
  EnumerationConfig c;
  c.variables = testing::var_names(vars);
  c.max_size = max_size;
  c.max_vars_per_formula = max_vars;
  return c;
}

std::uint32_t table_over(const BoolFormula& f, const std::vector<std::string>& vars) {
  const auto bits = testing::brute_table(f, vars);
  std::uint32_t t = 0;
  for (std::size_t m = 0; m < bits.size(); ++m) t |= static_cast<std::uint32_t>(bits[m]) << m;
  return t;
}

BooleanizedDataset dataset(std::vector<std::string> vars,
                           const std::vector<std::pair<Label, std::vector<Cell>>>& rows) {
  BooleanizedDataset d;
  d.variables = std::move(vars);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.incident_ids.push_back("r" + std::to_string(i));
    d.labels.push_back(rows[i].first);
    d.rows.push_back(rows[i].second);
  }
  return d;
}

constexpr Cell T = Cell::kTrue;
constexpr Cell F = Cell::kFalse;
constexpr Cell M = Cell::kMissing;
constexpr Label P = Label::kPositive;
constexpr Label N = Label::kNegative;

TEST(Enumerate, OneVariableHasTwoClasses) {
  const auto fs = enumerate_formulas(config(1, 2));
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(format_formula(fs[0]), "a");
  EXPECT_EQ(format_formula(fs[1]), "!a");
}

TEST(Enumerate, TwoVariablesHaveFourteenClasses) {
  const auto vars = testing::var_names(2);
  const auto fs = enumerate_formulas(config(2, 9));
  std::set<std::uint32_t> tables;
  for (const auto& f : fs) tables.insert(table_over(f, vars));
  EXPECT_EQ(fs.size(), 14u);
  EXPECT_EQ(tables.size(), 14u);
  // Brute-force census: every non-constant function of two variables.
  std::set<std::uint32_t> all;
  for (std::uint32_t t = 1; t + 1 < 16; ++t) all.insert(t);
  EXPECT_EQ(tables, all);
}

TEST(Enumerate, RepresentativesAreSizeMinimal) {
  for (std::size_t n : {2u, 3u}) {
    const auto vars = testing::var_names(n);
    const std::size_t cap = n == 2 ? 9 : 7;
    const auto best = testing::min_sizes(n, cap);
    const auto fs = enumerate_formulas(config(n, cap));
    std::size_t reachable = 0;
    for (std::size_t t = 1; t + 1 < best.size(); ++t) {
      // Functions that ignore some variable are reached by the smaller
      // census too; count the ones within the cap.
      reachable += best[t] != 0 ? 1 : 0;
    }
    EXPECT_EQ(fs.size(), reachable) << n;
    for (const auto& f : fs) {
      EXPECT_EQ(f.size(), best[table_over(f, vars)]) << format_formula(f);
    }
  }
}

TEST(Enumerate, ThreeVariablesUniqueAndContingent) {
  const auto vars = testing::var_names(3);
  const auto fs = enumerate_formulas(config(3, 9));
  std::set<std::uint32_t> tables;
  for (const auto& f : fs) {
    EXPECT_EQ(sat_status(f), SatStatus::kContingent) << format_formula(f);
    EXPECT_TRUE(tables.insert(table_over(f, vars)).second) << format_formula(f);
    EXPECT_EQ(parse_formula(format_formula(f)), f);
  }
  EXPECT_LE(fs.size(), 254u);
}

TEST(Enumerate, ImplicationKeepsClassesUnique) {
  const auto vars = testing::var_names(3);
  EnumerationConfig c = config(3, 7);
  c.operators.implication = true;
  const auto best = testing::min_sizes(3, 7);
  std::set<std::uint32_t> tables;
  for (const auto& f : enumerate_formulas(c)) {
    const auto t = table_over(f, vars);
    EXPECT_TRUE(tables.insert(t).second) << format_formula(f);
    EXPECT_EQ(parse_formula(format_formula(f)), f);
    // Implication can only shorten a representative.
    if (best[t] != 0) {
      EXPECT_LE(f.size(), best[t]) << format_formula(f);
    }
  }
}

TEST(Enumerate, OrderedBySizeThenText) {
  const auto fs = enumerate_formulas(config(3, 7));
  for (std::size_t i = 1; i < fs.size(); ++i) {
    const auto a = std::make_pair(fs[i - 1].size(), format_formula(fs[i - 1]));
    const auto b = std::make_pair(fs[i].size(), format_formula(fs[i]));
    EXPECT_LT(a, b);
  }
}

TEST(Enumerate, WorkerCountDoesNotMatter) {
  const auto c = config(5, 7, 3);
  const auto one = enumerate_formulas(c, 1);
  EXPECT_EQ(enumerate_formulas(c, 4), one);
  EXPECT_EQ(enumerate_formulas(c, 3), one);
}

TEST(Enumerate, VariableCapRespected) {
  for (const auto& f : enumerate_formulas(config(5, 7, 2))) EXPECT_LE(f.variables().size(), 2u);
}

TEST(Enumerate, OperatorSubsets) {
  EnumerationConfig c = config(2, 5);
  c.operators.negation = false;
  c.operators.disjunction = false;
  std::set<std::string> texts;
  for (const auto& f : enumerate_formulas(c)) texts.insert(format_formula(f));
  EXPECT_EQ(texts, (std::set<std::string>{"a", "b", "a & b"}));

  c.operators = OperatorSet{false, false, false, true};
  texts.clear();
  for (const auto& f : enumerate_formulas(c)) texts.insert(format_formula(f));
  EXPECT_EQ(texts, (std::set<std::string>{"a", "b", "a -> b", "b -> a", "(a -> b) -> b"}));
}

TEST(Enumerate, ConfigValidation) {
  EXPECT_THROW(enumerate_formulas(config(2, 0)), Error);
  EXPECT_THROW(enumerate_formulas(config(8, 5, 7)), Error);
  EnumerationConfig dup = config(2, 3);
  dup.variables.push_back("a");
  EXPECT_THROW(enumerate_formulas(dup), Error);
}

TEST(Score, Examples) {
  const auto a = parse_formula("a");
  auto s = score_formula(a, dataset({"a"}, {{P, {T}}, {P, {F}}, {N, {F}}})).stats;
  EXPECT_EQ(s.tpr, 0.5);
  EXPECT_EQ(s.tnr, 1.0);
  EXPECT_EQ(s.j, 0.5);

  s = score_formula(a, dataset({"a"}, {{P, {M}}})).stats;
  EXPECT_EQ(s.n_pos_skipped, 1u);
  EXPECT_EQ(s.n_pos_sat + s.n_pos_unsat + s.n_neg_sat + s.n_neg_unsat, 0u);
  EXPECT_FALSE(s.tpr_defined);

  EXPECT_THROW(score_formula(parse_formula("zz"), dataset({"a"}, {{P, {T}}})), Error);
}

TEST(Score, PerfectSeparationByExemplar) {
  const auto f = parse_formula("cross_border & (high_risk_source | high_risk_product)");
  std::vector<std::pair<Label, std::vector<Cell>>> rows;
  for (int m = 0; m < 8; ++m) {
    const bool cb = m & 4, hs = m & 2, hp = m & 1;
    rows.push_back({cb && (hs || hp) ? P : N, {cb ? T : F, hs ? T : F, hp ? T : F}});
  }
  const auto d = dataset({"cross_border", "high_risk_source", "high_risk_product"}, rows);
  EXPECT_EQ(score_formula(f, d).stats.j, 1.0);
}

TEST(Score, BookkeepingAndAntisymmetry) {
  Rng rng(9);
  const auto vars = testing::var_names(4);
  for (int trial = 0; trial < 300; ++trial) {
    const bool with_missing = trial % 2 == 0;
    const auto d = testing::random_booleanized(rng, 4, 1 + rng.below(60), with_missing ? 0.2 : 0.0);
    const auto f = testing::random_bool(rng, vars, 4).formula;
    const auto s = score_formula(f, d).stats;
    const auto c = testing::brute_counts(f, d);
    ASSERT_EQ(s.n_pos_sat, c.pos_sat);
    ASSERT_EQ(s.n_pos_unsat, c.pos_unsat);
    ASSERT_EQ(s.n_neg_sat, c.neg_sat);
    ASSERT_EQ(s.n_neg_unsat, c.neg_unsat);
    ASSERT_EQ(s.n_pos_skipped, c.pos_skip);
    ASSERT_EQ(s.n_neg_skipped, c.neg_skip);
    ASSERT_GE(s.j, -1.0);
    ASSERT_LE(s.j, 1.0);
    const bool both_classes = c.pos_sat + c.pos_unsat > 0 && c.neg_sat + c.neg_unsat > 0;
    if (!with_missing && both_classes) {
      ASSERT_EQ(score_formula(BoolFormula::negate(f), d).stats.j, -s.j);
    }
  }
}

TEST(Mine, DegenerateDataset) {
  try {
    mine(config(1, 2), dataset({"a"}, {{P, {T}}, {P, {F}}}), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateDataset);
  }
}

TEST(Mine, IndependentLabelsGiveZeroJ) {
  std::vector<std::pair<Label, std::vector<Cell>>> rows;
  for (int m = 0; m < 4; ++m) {
    for (Label l : {P, N}) rows.push_back({l, {m & 2 ? T : F, m & 1 ? T : F}});
  }
  const auto ranked = mine(config(2, 9), dataset({"a", "b"}, rows), 100);
  EXPECT_EQ(ranked.size(), 14u);
  for (const auto& r : ranked) EXPECT_EQ(r.stats.j, 0.0) << r.text;
}

TEST(Mine, RecoversExemplar) {
  Rng rng(12);
  const std::vector<std::string> vars = {"cross_border", "high_risk_source", "high_risk_product", "noise"};
  std::vector<std::pair<Label, std::vector<Cell>>> rows;
  for (int i = 0; i < 64; ++i) {
    const int m = i < 16 ? i : static_cast<int>(rng.below(16));
    const bool cb = m & 8, hs = m & 4, hp = m & 2, nz = m & 1;
    rows.push_back({cb && (hs || hp) ? P : N, {cb ? T : F, hs ? T : F, hp ? T : F, nz ? T : F}});
  }
  EnumerationConfig c = config(4, 7);
  c.variables = vars;
  const auto ranked = mine(c, dataset(vars, rows), 10);
  ASSERT_FALSE(ranked.empty());
  EXPECT_EQ(ranked[0].stats.j, 1.0);
  EXPECT_EQ(truth_table(ranked[0].formula),
            truth_table(parse_formula("cross_border & (high_risk_source | high_risk_product)")));
}

TEST(Mine, RankingAndParallelDeterminism) {
  Rng rng(13);
  const auto d = testing::random_booleanized(rng, 5, 80, 0.1);
  const auto c = config(5, 7, 3);
  const auto one = mine(c, d, 50, 1);
  EXPECT_EQ(mine(c, d, 50, 4), one);
  for (std::size_t i = 1; i < one.size(); ++i) EXPECT_FALSE(ranks_before(one[i], one[i - 1]));
}

TEST(Mine, AllMissingVariablesAreDropped) {
  const auto d = dataset({"a", "b"}, {{P, {T, M}}, {N, {F, M}}});
  EnumerationConfig c;
  c.max_size = 3;
  const auto ranked = mine(c, d, 10);
  for (const auto& r : ranked) EXPECT_EQ(r.formula.variables(), std::vector<std::string>{"a"});
}

}  // namespace
}  // namespace flminer
