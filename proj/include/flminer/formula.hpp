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

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace flminer {

enum class BoolOp : std::uint8_t { kVar, kNot, kAnd, kOr, kImplies };

/// Immutable propositional formula. Copies share structure.
class BoolFormula {
 public:
  struct Node;

  BoolFormula() = default;

  static BoolFormula var(std::string name);
  static BoolFormula negate(BoolFormula f);
  static BoolFormula conj(BoolFormula f, BoolFormula g);
  static BoolFormula disj(BoolFormula f, BoolFormula g);
  static BoolFormula implies(BoolFormula f, BoolFormula g);

  bool valid() const noexcept;
  BoolOp op() const;
  const std::string& name() const;
  const BoolFormula& lhs() const;
  const BoolFormula& rhs() const;
  /// AST node count, leaves included.
  std::size_t size() const noexcept;

  /// Sorted, unique.
  std::vector<std::string> variables() const;

  friend bool operator==(const BoolFormula& a, const BoolFormula& b);

 private:
  explicit BoolFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct BoolFormula::Node {
  BoolOp op;
  std::string name;  // kVar only
  BoolFormula lhs;   // kNot uses lhs only
  BoolFormula rhs;
  std::size_t size;
};

inline bool BoolFormula::valid() const noexcept { return node_ != nullptr; }
inline BoolOp BoolFormula::op() const { return node_->op; }
inline const std::string& BoolFormula::name() const { return node_->name; }
inline const BoolFormula& BoolFormula::lhs() const { return node_->lhs; }
inline const BoolFormula& BoolFormula::rhs() const { return node_->rhs; }
inline std::size_t BoolFormula::size() const noexcept { return node_ ? node_->size : 0; }

/// Grammar, loosest to tightest: implies (`->`, right associative),
/// or (`|`, `or`), and (`&`, `and`), not (`!`, `not`), atoms
/// `[a-z_][a-z0-9_]*` and parentheses. Binary `&`/`|` associate left.
BoolFormula parse_formula(std::string_view text);

/// Minimal parentheses; parse_formula(format_formula(f)) == f.
std::string format_formula(const BoolFormula& f);

/// Rewrites every Implies(f, g) as Or(Not f, g).
BoolFormula normalize_implies(const BoolFormula& f);

bool eval_formula(const BoolFormula& f, const std::map<std::string, bool, std::less<>>& assignment);

inline constexpr std::size_t kTruthTableCap = 16;

/// bit i is the value under the i-th assignment in lexicographic order over
/// the sorted variables (first variable most significant).
struct TruthTable {
  std::vector<std::string> variables;
  std::vector<std::uint64_t> words;

  std::size_t num_bits() const noexcept { return std::size_t{1} << variables.size(); }
  bool bit(std::size_t i) const noexcept { return (words[i / 64] >> (i % 64)) & 1U; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

TruthTable truth_table(const BoolFormula& f, std::size_t cap = kTruthTableCap);

enum class SatStatus { kContingent, kTautology, kContradiction };

std::string_view sat_status_name(SatStatus s) noexcept;
SatStatus sat_status(const BoolFormula& f, std::size_t cap = kTruthTableCap);

}  // namespace flminer
