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

#include "flminer/mltl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "flminer/error.hpp"

namespace flminer {
namespace {

using nlohmann::json;

MltlFormula::Node make(MltlOp op, std::string name, std::size_t lo, std::size_t hi,
                       MltlFormula lhs, MltlFormula rhs) {
  const bool temporal = op == MltlOp::kFinally || op == MltlOp::kGlobally || op == MltlOp::kUntil;
  const std::size_t depth =
      std::max(lhs.temporal_depth(), rhs.temporal_depth()) + (temporal ? 1 : 0);
  const std::size_t size = 1 + lhs.size() + rhs.size();
  return MltlFormula::Node{op, std::move(name), lo, hi, std::move(lhs), std::move(rhs), size, depth};
}

void check_bounds(std::size_t lo, std::size_t hi) {
  if (lo > hi) throw Error(ErrorCode::kParseError, fmt::format("bound [{},{}] has lo > hi", lo, hi));
}

enum class Tok { kIdent, kNot, kAnd, kOr, kImplies, kLParen, kRParen, kF, kG, kU, kLBracket,
                 kRBracket, kComma, kNumber, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_start = [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; };
  auto ident_char = [&](char c) { return ident_start(c) || (c >= '0' && c <= '9'); };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    switch (c) {
      case '!': out.push_back({Tok::kNot, "!", i++}); continue;
      case '&': out.push_back({Tok::kAnd, "&", i++}); continue;
      case '|': out.push_back({Tok::kOr, "|", i++}); continue;
      case '(': out.push_back({Tok::kLParen, "(", i++}); continue;
      case ')': out.push_back({Tok::kRParen, ")", i++}); continue;
      case '[': out.push_back({Tok::kLBracket, "[", i++}); continue;
      case ']': out.push_back({Tok::kRBracket, "]", i++}); continue;
      case ',': out.push_back({Tok::kComma, ",", i++}); continue;
      case 'F': out.push_back({Tok::kF, "F", i++}); continue;
      case 'G': out.push_back({Tok::kG, "G", i++}); continue;
      case 'U': out.push_back({Tok::kU, "U", i++}); continue;
      default: break;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::kImplies, "->", i});
      i += 2;
    } else if (c >= '0' && c <= '9') {
      while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
      out.push_back({Tok::kNumber, std::string(s.substr(start, i - start)), start});
    } else if (ident_start(c)) {
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

  MltlFormula parse() {
    auto f = implication();
    if (peek().kind != Tok::kEnd) throw ParseError(peek().pos, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) throw ParseError(peek().pos, what);
  }
  std::size_t number() {
    const Token& t = peek();
    if (t.kind != Tok::kNumber) throw ParseError(t.pos, "bound");
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) throw ParseError(t.pos, "bound");
    ++pos_;
    return v;
  }
  std::pair<std::size_t, std::size_t> bounds() {
    expect(Tok::kLBracket, "'['");
    const auto lo = number();
    expect(Tok::kComma, "','");
    const auto hi = number();
    expect(Tok::kRBracket, "']'");
    if (lo > hi) throw ParseError(peek().pos, "lo <= hi");
    return {lo, hi};
  }

  MltlFormula implication() {
    auto lhs = disjunction();
    if (accept(Tok::kImplies)) return MltlFormula::implies(std::move(lhs), implication());
    return lhs;
  }
  MltlFormula disjunction() {
    auto f = conjunction();
    while (accept(Tok::kOr)) f = MltlFormula::disj(std::move(f), conjunction());
    return f;
  }
  MltlFormula conjunction() {
    auto f = until();
    while (accept(Tok::kAnd)) f = MltlFormula::conj(std::move(f), until());
    return f;
  }
  MltlFormula until() {
    auto f = unary();
    while (accept(Tok::kU)) {
      auto [lo, hi] = bounds();
      f = MltlFormula::until(lo, hi, std::move(f), unary());
    }
    return f;
  }
  MltlFormula unary() {
    if (accept(Tok::kNot)) return MltlFormula::negate(unary());
    if (accept(Tok::kF)) {
      auto [lo, hi] = bounds();
      return MltlFormula::finally(lo, hi, unary());
    }
    if (accept(Tok::kG)) {
      auto [lo, hi] = bounds();
      return MltlFormula::globally(lo, hi, unary());
    }
    const Token& t = peek();
    if (t.kind == Tok::kIdent) {
      ++pos_;
      return MltlFormula::atom(t.text);
    }
    if (accept(Tok::kLParen)) {
      auto f = implication();
      expect(Tok::kRParen, "')'");
      return f;
    }
    throw ParseError(t.pos, "atom, unary operator or '('");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(MltlOp op) {
  switch (op) {
    case MltlOp::kImplies: return 1;
    case MltlOp::kOr: return 2;
    case MltlOp::kAnd: return 3;
    case MltlOp::kUntil: return 4;
    case MltlOp::kNot:
    case MltlOp::kFinally:
    case MltlOp::kGlobally: return 5;
    case MltlOp::kAtom: return 6;
  }
  return 6;
}

void format_into(const MltlFormula& f, std::string& out) {
  auto wrapped = [&](const MltlFormula& g, bool paren) {
    if (paren) out.push_back('(');
    format_into(g, out);
    if (paren) out.push_back(')');
  };
  const int p = precedence(f.op());
  switch (f.op()) {
    case MltlOp::kAtom: out += f.name(); return;
    case MltlOp::kNot:
      out.push_back('!');
      wrapped(f.lhs(), precedence(f.lhs().op()) < p);
      return;
    case MltlOp::kFinally:
    case MltlOp::kGlobally:
      out += fmt::format("{}[{},{}] ", f.op() == MltlOp::kFinally ? 'F' : 'G', f.lo(), f.hi());
      wrapped(f.lhs(), precedence(f.lhs().op()) < p);
      return;
    case MltlOp::kUntil:
      wrapped(f.lhs(), precedence(f.lhs().op()) < p);
      out += fmt::format(" U[{},{}] ", f.lo(), f.hi());
      wrapped(f.rhs(), precedence(f.rhs().op()) <= p);
      return;
    case MltlOp::kAnd:
    case MltlOp::kOr:
      wrapped(f.lhs(), precedence(f.lhs().op()) < p);
      out += f.op() == MltlOp::kAnd ? " & " : " | ";
      wrapped(f.rhs(), precedence(f.rhs().op()) <= p);
      return;
    case MltlOp::kImplies:
      wrapped(f.lhs(), precedence(f.lhs().op()) <= p);
      out += " -> ";
      wrapped(f.rhs(), precedence(f.rhs().op()) < p);
      return;
  }
}

bool eval_at(const MltlFormula& f, const Trace& t, std::size_t i) {
  const std::size_t len = t.length();
  switch (f.op()) {
    case MltlOp::kAtom: {
      const auto v = t.var_index(f.name());
      if (!v) throw Error(ErrorCode::kUnboundVariable, "unbound atom " + f.name());
      return t.at(*v, i);
    }
    case MltlOp::kNot: return !eval_at(f.lhs(), t, i);
    case MltlOp::kAnd: return eval_at(f.lhs(), t, i) && eval_at(f.rhs(), t, i);
    case MltlOp::kOr: return eval_at(f.lhs(), t, i) || eval_at(f.rhs(), t, i);
    case MltlOp::kImplies: return !eval_at(f.lhs(), t, i) || eval_at(f.rhs(), t, i);
    case MltlOp::kFinally: {
      if (i + f.lo() >= len) return false;
      const std::size_t last = std::min(i + f.hi(), len - 1);
      for (std::size_t j = i + f.lo(); j <= last; ++j) {
        if (eval_at(f.lhs(), t, j)) return true;
      }
      return false;
    }
    case MltlOp::kGlobally: {
      if (i + f.lo() >= len) return true;
      const std::size_t last = std::min(i + f.hi(), len - 1);
      for (std::size_t j = i + f.lo(); j <= last; ++j) {
        if (!eval_at(f.lhs(), t, j)) return false;
      }
      return true;
    }
    case MltlOp::kUntil: {
      if (i + f.lo() >= len) return false;
      const std::size_t last = std::min(i + f.hi(), len - 1);
      for (std::size_t j = i + f.lo(); j <= last; ++j) {
        if (eval_at(f.rhs(), t, j)) return true;
        if (!eval_at(f.lhs(), t, j)) return false;
      }
      return false;
    }
  }
  return false;
}

void collect_atoms(const MltlFormula& f, std::set<std::string>& out) {
  if (f.op() == MltlOp::kAtom) {
    out.insert(f.name());
    return;
  }
  if (f.lhs().valid()) collect_atoms(f.lhs(), out);
  if (f.rhs().valid()) collect_atoms(f.rhs(), out);
}

}  // namespace

std::optional<std::size_t> Trace::var_index(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == name) return i;
  }
  return std::nullopt;
}

void validate_trace(const Trace& trace) {
  if (trace.steps.empty()) throw Error(ErrorCode::kBadValue, "trace " + trace.trace_id + " is empty");
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    if (trace.steps[s].size() != trace.vars.size()) {
      throw Error(ErrorCode::kBadValue,
                  fmt::format("trace {} step {} binds {} of {} variables", trace.trace_id, s,
                              trace.steps[s].size(), trace.vars.size()));
    }
  }
  std::set<std::string_view> seen;
  for (const auto& v : trace.vars) {
    if (!seen.insert(v).second) {
      throw Error(ErrorCode::kBadValue, "trace " + trace.trace_id + " repeats variable " + v);
    }
  }
}

std::vector<Trace> parse_traces_jsonl(std::string_view text) {
  std::vector<Trace> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json j = json::parse(line);
      Trace t;
      t.trace_id = j.at("trace_id").get<std::string>();
      const auto label = j.at("label").get<std::string>();
      if (label != "pos" && label != "neg") throw Error(ErrorCode::kBadValue, "label must be pos or neg");
      t.label = label == "pos" ? Label::kPositive : Label::kNegative;
      t.vars = j.at("vars").get<std::vector<std::string>>();
      for (const auto& step : j.at("steps")) {
        std::vector<bool> row;
        for (const auto& bit : step) row.push_back(bit.is_boolean() ? bit.get<bool>() : bit.get<int>() != 0);
        t.steps.push_back(std::move(row));
      }
      validate_trace(t);
      out.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBadValue, fmt::format("trace line {}: {}", line_no, e.what()));
    } catch (const Error& e) {
      throw Error(ErrorCode::kBadValue, fmt::format("trace line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

std::string write_traces_jsonl(const std::vector<Trace>& traces) {
  std::string out;
  for (const auto& t : traces) {
    json steps = json::array();
    for (const auto& s : t.steps) {
      json row = json::array();
      for (bool b : s) row.push_back(b ? 1 : 0);
      steps.push_back(std::move(row));
    }
    const json j = {{"trace_id", t.trace_id},
                    {"label", t.label == Label::kPositive ? "pos" : "neg"},
                    {"vars", t.vars},
                    {"steps", steps}};
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

MltlFormula MltlFormula::atom(std::string name) {
  if (name.empty()) throw Error(ErrorCode::kParseError, "empty atom name");
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kAtom, std::move(name), 0, 0, {}, {})));
}
MltlFormula MltlFormula::negate(MltlFormula f) {
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kNot, {}, 0, 0, std::move(f), {})));
}
MltlFormula MltlFormula::conj(MltlFormula f, MltlFormula g) {
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kAnd, {}, 0, 0, std::move(f), std::move(g))));
}
MltlFormula MltlFormula::disj(MltlFormula f, MltlFormula g) {
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kOr, {}, 0, 0, std::move(f), std::move(g))));
}
MltlFormula MltlFormula::implies(MltlFormula f, MltlFormula g) {
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kImplies, {}, 0, 0, std::move(f), std::move(g))));
}
MltlFormula MltlFormula::finally(std::size_t lo, std::size_t hi, MltlFormula f) {
  check_bounds(lo, hi);
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kFinally, {}, lo, hi, std::move(f), {})));
}
MltlFormula MltlFormula::globally(std::size_t lo, std::size_t hi, MltlFormula f) {
  check_bounds(lo, hi);
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kGlobally, {}, lo, hi, std::move(f), {})));
}
MltlFormula MltlFormula::until(std::size_t lo, std::size_t hi, MltlFormula f, MltlFormula g) {
  check_bounds(lo, hi);
  return MltlFormula(std::make_shared<const Node>(make(MltlOp::kUntil, {}, lo, hi, std::move(f), std::move(g))));
}

std::vector<std::string> MltlFormula::atoms() const {
  std::set<std::string> out;
  if (node_) collect_atoms(*this, out);
  return {out.begin(), out.end()};
}

bool operator==(const MltlFormula& a, const MltlFormula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op() || a.size() != b.size() || a.lo() != b.lo() || a.hi() != b.hi()) return false;
  if (a.op() == MltlOp::kAtom) return a.name() == b.name();
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

MltlFormula parse_mltl(std::string_view text) { return Parser(text).parse(); }

std::string format_mltl(const MltlFormula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

bool eval_mltl(const MltlFormula& f, const Trace& trace, std::size_t i) {
  if (i >= trace.length()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                fmt::format("time index {} outside trace {} of length {}", i, trace.trace_id,
                            trace.length()));
  }
  return eval_at(f, trace, i);
}

bool eval_response(const Trace& trace, std::string_view antecedent, std::string_view consequent,
                   std::size_t t) {
  if (trace.length() == 0) throw Error(ErrorCode::kIndexOutOfRange, "empty trace");
  const auto f = MltlFormula::globally(
      0, trace.length() - 1,
      MltlFormula::implies(MltlFormula::atom(std::string(antecedent)),
                           MltlFormula::finally(0, t, MltlFormula::atom(std::string(consequent)))));
  return eval_mltl(f, trace, 0);
}

BoundInference infer_bound(const std::vector<Trace>& traces, std::string_view antecedent,
                           std::string_view consequent) {
  if (traces.empty()) throw Error(ErrorCode::kDegenerateDataset, "no traces");
  BoundInference out{std::string(antecedent), std::string(consequent), std::nullopt, {}};
  for (const auto& t : traces) {
    if (!t.var_index(antecedent) || !t.var_index(consequent)) {
      throw Error(ErrorCode::kUnknownVariable,
                  fmt::format("trace {} lacks {} or {}", t.trace_id, antecedent, consequent));
    }
  }
  bool unbounded = false;
  std::size_t worst = 0;
  for (const auto& t : traces) {
    if (t.label != Label::kPositive) continue;
    const auto a = *t.var_index(antecedent);
    const auto c = *t.var_index(consequent);
    TraceDelay d{t.trace_id, 0, std::nullopt, false};
    std::size_t trace_worst = 0;
    for (std::size_t k = 0; k < t.length(); ++k) {
      if (!t.at(a, k)) continue;
      ++d.antecedents;
      std::size_t j = k;
      while (j < t.length() && !t.at(c, j)) ++j;
      if (j == t.length()) {
        d.unbounded = true;
      } else {
        trace_worst = std::max(trace_worst, j - k);
      }
    }
    if (d.antecedents > 0 && !d.unbounded) d.delay = trace_worst;
    unbounded = unbounded || d.unbounded;
    worst = std::max(worst, trace_worst);
    out.per_trace.push_back(std::move(d));
  }
  if (!unbounded) out.t_star = worst;
  return out;
}

}  // namespace flminer
