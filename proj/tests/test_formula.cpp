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

#include "flminer/error.hpp"
#include "flminer/formula.hpp"
#include "support.hpp"

namespace flminer {
namespace {

using B = BoolFormula;
using testing::Rng;

const char* kExemplar = "cross_border & (high_risk_source | high_risk_product)";

std::map<std::string, bool, std::less<>> assign(bool cb, bool hs, bool hp) {
  return {{"cross_border", cb}, {"high_risk_source", hs}, {"high_risk_product", hp}};
}

TEST(Parse, Exemplar) {
  const B expected = B::conj(B::var("cross_border"),
                             B::disj(B::var("high_risk_source"), B::var("high_risk_product")));
  EXPECT_EQ(parse_formula(kExemplar), expected);
  EXPECT_EQ(parse_formula(kExemplar).size(), 5u);
}

TEST(Parse, Atom) { EXPECT_EQ(parse_formula("a"), B::var("a")); }

TEST(Parse, ImpliesIsRightAssociative) {
  EXPECT_EQ(parse_formula("a -> b -> c"), B::implies(B::var("a"), B::implies(B::var("b"), B::var("c"))));
}

TEST(Parse, PrecedenceAndKeywords) {
  EXPECT_EQ(parse_formula("a | b & c"), B::disj(B::var("a"), B::conj(B::var("b"), B::var("c"))));
  EXPECT_EQ(parse_formula("a & b & c"), B::conj(B::conj(B::var("a"), B::var("b")), B::var("c")));
  EXPECT_EQ(parse_formula("not a and b or c"),
            B::disj(B::conj(B::negate(B::var("a")), B::var("b")), B::var("c")));
  EXPECT_EQ(parse_formula("!!a"), B::negate(B::negate(B::var("a"))));
  EXPECT_EQ(parse_formula("a | b -> c"), B::implies(B::disj(B::var("a"), B::var("b")), B::var("c")));
}

TEST(Parse, Errors) {
  for (const char* bad : {"", "a &", "(a", "a b", "A", "a -", "& a", "a)"}) {
    try {
      parse_formula(bad);
      FAIL() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError) << bad;
    }
  }
}

TEST(Format, MinimalParentheses) {
  EXPECT_EQ(format_formula(parse_formula(kExemplar)), kExemplar);
  EXPECT_EQ(format_formula(parse_formula("(a -> b) -> c")), "(a -> b) -> c");
  EXPECT_EQ(format_formula(parse_formula("a -> (b -> c)")), "a -> b -> c");
  EXPECT_EQ(format_formula(parse_formula("a & (b & c)")), "a & (b & c)");
  EXPECT_EQ(format_formula(parse_formula("!(a | b)")), "!(a | b)");
}

TEST(Format, RoundTripProperty) {
  Rng rng(1);
  const auto vars = testing::var_names(4);
  for (int i = 0; i < 3000; ++i) {
    const auto f = testing::random_bool(rng, vars, 5).formula;
    ASSERT_EQ(parse_formula(format_formula(f)), f) << format_formula(f);
  }
}

TEST(Eval, Examples) {
  const B f = parse_formula(kExemplar);
  EXPECT_TRUE(eval_formula(f, assign(true, false, true)));
  EXPECT_FALSE(eval_formula(f, assign(true, false, false)));
  EXPECT_FALSE(eval_formula(parse_formula("!a"), {{"a", true}}));
  try {
    eval_formula(f, {{"cross_border", true}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnboundVariable);
  }
}

TEST(Eval, AgreesWithOracle) {
  Rng rng(2);
  const auto vars = testing::var_names(5);
  for (int i = 0; i < 20000; ++i) {
    const auto rf = testing::random_bool(rng, vars, 5);
    std::vector<bool> a(vars.size());
    std::map<std::string, bool, std::less<>> m;
    for (std::size_t v = 0; v < vars.size(); ++v) m[vars[v]] = a[v] = rng.coin();
    ASSERT_EQ(eval_formula(rf.formula, m), testing::oracle_eval(*rf.oracle, a)) << format_formula(rf.formula);
  }
}

TEST(Normalize, ImpliesBecomesOr) {
  EXPECT_EQ(normalize_implies(parse_formula("a -> b")), parse_formula("!a | b"));
  Rng rng(3);
  const auto vars = testing::var_names(3);
  for (int i = 0; i < 500; ++i) {
    const auto f = testing::random_bool(rng, vars, 4).formula;
    const auto g = normalize_implies(f);
    EXPECT_EQ(format_formula(g).find("->"), std::string::npos);
    EXPECT_EQ(truth_table(g), truth_table(f));
  }
}

TEST(TruthTable, Examples) {
  const auto a = truth_table(parse_formula("a"));
  EXPECT_EQ(a.num_bits(), 2u);
  EXPECT_FALSE(a.bit(0));
  EXPECT_TRUE(a.bit(1));
  const auto c = truth_table(parse_formula("a & !a"));
  EXPECT_FALSE(c.bit(0));
  EXPECT_FALSE(c.bit(1));
}

TEST(TruthTable, ExemplarMatchesBruteForce) {
  const B f = parse_formula(kExemplar);
  const auto t = truth_table(f);
  ASSERT_EQ(t.variables, (std::vector<std::string>{"cross_border", "high_risk_product", "high_risk_source"}));
  const auto brute = testing::brute_table(f, t.variables);
  ASSERT_EQ(brute.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(t.bit(i), brute[i]) << i;
}

TEST(TruthTable, RandomFormulasMatchBruteForce) {
  Rng rng(4);
  for (int i = 0; i < 400; ++i) {
    const auto vars = testing::var_names(1 + rng.below(8));
    const auto f = testing::random_bool(rng, vars, 6).formula;
    const auto t = truth_table(f);
    const auto brute = testing::brute_table(f, t.variables);
    for (std::size_t k = 0; k < brute.size(); ++k) ASSERT_EQ(t.bit(k), brute[k]);
  }
}

TEST(TruthTable, VariableCap) {
  B f = B::var("v0");
  for (int i = 1; i < 17; ++i) f = B::conj(f, B::var("v" + std::to_string(i)));
  try {
    truth_table(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyVariables);
  }
}

TEST(SatStatus, Examples) {
  EXPECT_EQ(sat_status(parse_formula("a | !a")), SatStatus::kTautology);
  EXPECT_EQ(sat_status(parse_formula("a & !a")), SatStatus::kContradiction);
  EXPECT_EQ(sat_status(parse_formula(kExemplar)), SatStatus::kContingent);
}

}  // namespace
}  // namespace flminer
