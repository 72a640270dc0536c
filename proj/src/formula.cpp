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

#include "flminer/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "flminer/error.hpp"

namespace flminer {
namespace {

BoolFormula::Node make_node(BoolOp op, std::string name, BoolFormula lhs, BoolFormula rhs) {
  const std::size_t size = 1 + lhs.size() + rhs.size();
  return BoolFormula::Node{op, std::move(name), std::move(lhs), std::move(rhs), size};
}

enum class Tok { kIdent, kNot, kAnd, kOr, kImplies, kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '!') {
      out.push_back({Tok::kNot, "!", i++});
    } else if (c == '&') {
      out.push_back({Tok::kAnd, "&", i++});
    } else if (c == '|') {
      out.push_back({Tok::kOr, "|", i++});
    } else if (c == '(') {
      out.push_back({Tok::kLParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::kRParen, ")", i++});
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::kImplies, "->", i});
      i += 2;
    } else if (ident_start(c)) {
      const std::size_t start = i;
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string word(s.substr(start, i - start));
      Tok kind = Tok::kIdent;
      if (word == "not") kind = Tok::kNot;
      if (word == "and") kind = Tok::kAnd;
      if (word == "or") kind = Tok::kOr;
      out.push_back({kind, std::move(word), start});
    } else {
      throw ParseError(i, "identifier, operator or parenthesis");
    }
  }
  out.push_back({Tok::kEnd, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  BoolFormula parse() {
    BoolFormula f = implication();
    if (peek().kind != Tok::kEnd) throw ParseError(peek().pos, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  BoolFormula implication() {
    BoolFormula lhs = disjunction();
    if (accept(Tok::kImplies)) return BoolFormula::implies(std::move(lhs), implication());
    return lhs;
  }

  BoolFormula disjunction() {
    BoolFormula f = conjunction();
    while (accept(Tok::kOr)) f = BoolFormula::disj(std::move(f), conjunction());
    return f;
  }

  BoolFormula conjunction() {
    BoolFormula f = unary();
    while (accept(Tok::kAnd)) f = BoolFormula::conj(std::move(f), unary());
    return f;
  }

  BoolFormula unary() {
    if (accept(Tok::kNot)) return BoolFormula::negate(unary());
    const Token& t = peek();
    if (t.kind == Tok::kIdent) {
      ++pos_;
      return BoolFormula::var(t.text);
    }
    if (accept(Tok::kLParen)) {
      BoolFormula f = implication();
      if (!accept(Tok::kRParen)) throw ParseError(peek().pos, "')'");
      return f;
    }
    throw ParseError(t.pos, "identifier, '!' or '('");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(BoolOp op) {
  switch (op) {
    case BoolOp::kImplies: return 1;
    case BoolOp::kOr: return 2;
    case BoolOp::kAnd: return 3;
    case BoolOp::kNot: return 4;
    case BoolOp::kVar: return 5;
  }
  return 5;
}

void format_into(const BoolFormula& f, std::string& out) {
  auto wrapped = [&](const BoolFormula& g, bool paren) {
    if (paren) out.push_back('(');
    format_into(g, out);
    if (paren) out.push_back(')');
  };
  const int p = precedence(f.op());
  switch (f.op()) {
    case BoolOp::kVar:
      out += f.name();
      return;
    case BoolOp::kNot:
      out.push_back('!');
      wrapped(f.lhs(), precedence(f.lhs().op()) < p);
      return;
    case BoolOp::kAnd:
    case BoolOp::kOr:
      wrapped(f.lhs(), precedence(f.lhs().op()) < p);
      out += f.op() == BoolOp::kAnd ? " & " : " | ";
      wrapped(f.rhs(), precedence(f.rhs().op()) <= p);
      return;
    case BoolOp::kImplies:
      wrapped(f.lhs(), precedence(f.lhs().op()) <= p);
      out += " -> ";
      wrapped(f.rhs(), precedence(f.rhs().op()) < p);
      return;
  }
}

void collect_vars(const BoolFormula& f, std::set<std::string>& out) {
  if (f.op() == BoolOp::kVar) {
    out.insert(f.name());
    return;
  }
  collect_vars(f.lhs(), out);
  if (f.op() != BoolOp::kNot) collect_vars(f.rhs(), out);
}

std::vector<std::uint64_t> table_words(const BoolFormula& f,
                                       const std::vector<std::string>& vars) {
  const std::size_t n = vars.size();
  const std::size_t bits = std::size_t{1} << n;
  const std::size_t words = (bits + 63) / 64;
  switch (f.op()) {
    case BoolOp::kVar: {
      const auto k = static_cast<std::size_t>(
          std::lower_bound(vars.begin(), vars.end(), f.name()) - vars.begin());
      const std::size_t shift = n - 1 - k;
      std::vector<std::uint64_t> w(words, 0);
      for (std::size_t i = 0; i < bits; ++i) {
        if ((i >> shift) & 1U) w[i / 64] |= std::uint64_t{1} << (i % 64);
      }
      return w;
    }
    case BoolOp::kNot: {
      auto w = table_words(f.lhs(), vars);
      for (auto& x : w) x = ~x;
      if (bits < 64) w[0] &= (std::uint64_t{1} << bits) - 1;
      return w;
    }
    default: {
      auto a = table_words(f.lhs(), vars);
      auto b = table_words(f.rhs(), vars);
      for (std::size_t i = 0; i < words; ++i) {
        switch (f.op()) {
          case BoolOp::kAnd: a[i] &= b[i]; break;
          case BoolOp::kOr: a[i] |= b[i]; break;
          default: a[i] = ~a[i] | b[i]; break;
        }
      }
      if (bits < 64) a[0] &= (std::uint64_t{1} << bits) - 1;
      return a;
    }
  }
}

}  // namespace

BoolFormula BoolFormula::var(std::string name) {
  if (name.empty()) throw Error(ErrorCode::kParseError, "empty variable name");
  return BoolFormula(std::make_shared<const Node>(make_node(BoolOp::kVar, std::move(name), {}, {})));
}

BoolFormula BoolFormula::negate(BoolFormula f) {
  return BoolFormula(std::make_shared<const Node>(make_node(BoolOp::kNot, {}, std::move(f), {})));
}

BoolFormula BoolFormula::conj(BoolFormula f, BoolFormula g) {
  return BoolFormula(
      std::make_shared<const Node>(make_node(BoolOp::kAnd, {}, std::move(f), std::move(g))));
}

BoolFormula BoolFormula::disj(BoolFormula f, BoolFormula g) {
  return BoolFormula(
      std::make_shared<const Node>(make_node(BoolOp::kOr, {}, std::move(f), std::move(g))));
}

BoolFormula BoolFormula::implies(BoolFormula f, BoolFormula g) {
  return BoolFormula(
      std::make_shared<const Node>(make_node(BoolOp::kImplies, {}, std::move(f), std::move(g))));
}

std::vector<std::string> BoolFormula::variables() const {
  std::set<std::string> vars;
  if (node_) collect_vars(*this, vars);
  return {vars.begin(), vars.end()};
}

bool operator==(const BoolFormula& a, const BoolFormula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op() || a.size() != b.size()) return false;
  if (a.op() == BoolOp::kVar) return a.name() == b.name();
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

BoolFormula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string format_formula(const BoolFormula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

BoolFormula normalize_implies(const BoolFormula& f) {
  switch (f.op()) {
    case BoolOp::kVar: return f;
    case BoolOp::kNot: return BoolFormula::negate(normalize_implies(f.lhs()));
    case BoolOp::kAnd: return BoolFormula::conj(normalize_implies(f.lhs()), normalize_implies(f.rhs()));
    case BoolOp::kOr: return BoolFormula::disj(normalize_implies(f.lhs()), normalize_implies(f.rhs()));
    case BoolOp::kImplies:
      return BoolFormula::disj(BoolFormula::negate(normalize_implies(f.lhs())),
                               normalize_implies(f.rhs()));
  }
  return f;
}

bool eval_formula(const BoolFormula& f,
                  const std::map<std::string, bool, std::less<>>& assignment) {
  switch (f.op()) {
    case BoolOp::kVar: {
      auto it = assignment.find(f.name());
      if (it == assignment.end()) {
        throw Error(ErrorCode::kUnboundVariable, "unbound variable " + f.name());
      }
      return it->second;
    }
    case BoolOp::kNot: return !eval_formula(f.lhs(), assignment);
    case BoolOp::kAnd: return eval_formula(f.lhs(), assignment) && eval_formula(f.rhs(), assignment);
    case BoolOp::kOr: return eval_formula(f.lhs(), assignment) || eval_formula(f.rhs(), assignment);
    case BoolOp::kImplies:
      return !eval_formula(f.lhs(), assignment) || eval_formula(f.rhs(), assignment);
  }
  return false;
}

TruthTable truth_table(const BoolFormula& f, std::size_t cap) {
  TruthTable t;
  t.variables = f.variables();
  if (t.variables.size() > cap) {
    throw Error(ErrorCode::kTooManyVariables,
                fmt::format("{} variables exceed the truth-table cap of {}", t.variables.size(),
                            cap));
  }
  t.words = table_words(f, t.variables);
  return t;
}

std::string_view sat_status_name(SatStatus s) noexcept {
  switch (s) {
    case SatStatus::kContingent: return "contingent";
    case SatStatus::kTautology: return "tautology";
    case SatStatus::kContradiction: return "contradiction";
  }
  return "contingent";
}

SatStatus sat_status(const BoolFormula& f, std::size_t cap) {
  const TruthTable t = truth_table(f, cap);
  const std::size_t bits = t.num_bits();
  bool any = false;
  bool all = true;
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    const std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    any = any || (t.words[i] & mask) != 0;
    all = all && (t.words[i] & mask) == mask;
  }
  if (!any) return SatStatus::kContradiction;
  if (all) return SatStatus::kTautology;
  return SatStatus::kContingent;
}

}  // namespace flminer
