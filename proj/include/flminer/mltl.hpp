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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flminer/feature_model.hpp"

namespace flminer {

/// A finite, discrete-time sequence of Boolean assignments. Every step binds
/// every variable in `vars`, in that order.
struct Trace {
  std::string trace_id;
  Label label = Label::kPositive;
  std::vector<std::string> vars;
  std::vector<std::vector<bool>> steps;

  std::size_t length() const noexcept { return steps.size(); }
  std::optional<std::size_t> var_index(std::string_view name) const noexcept;
  bool at(std::size_t var, std::size_t step) const { return steps[step][var]; }

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Throws BadValue for empty traces or ragged steps.
void validate_trace(const Trace& trace);

/// One JSON object per line: {"trace_id", "label": "pos"|"neg", "vars": [...],
/// "steps": [[0,1,...], ...]}. Blank lines are ignored.
std::vector<Trace> parse_traces_jsonl(std::string_view text);
std::string write_traces_jsonl(const std::vector<Trace>& traces);

enum class MltlOp : std::uint8_t {
  kAtom, kNot, kAnd, kOr, kImplies, kFinally, kGlobally, kUntil
};

/// Immutable bounded temporal formula; temporal bounds satisfy lo <= hi.
class MltlFormula {
 public:
  struct Node;

  MltlFormula() = default;

  static MltlFormula atom(std::string name);
  static MltlFormula negate(MltlFormula f);
  static MltlFormula conj(MltlFormula f, MltlFormula g);
  static MltlFormula disj(MltlFormula f, MltlFormula g);
  static MltlFormula implies(MltlFormula f, MltlFormula g);
  static MltlFormula finally(std::size_t lo, std::size_t hi, MltlFormula f);
  static MltlFormula globally(std::size_t lo, std::size_t hi, MltlFormula f);
  static MltlFormula until(std::size_t lo, std::size_t hi, MltlFormula f, MltlFormula g);

  bool valid() const noexcept;
  MltlOp op() const;
  const std::string& name() const;
  std::size_t lo() const;
  std::size_t hi() const;
  const MltlFormula& lhs() const;
  const MltlFormula& rhs() const;
  std::size_t size() const noexcept;
  /// Maximum nesting of F/G/U operators.
  std::size_t temporal_depth() const noexcept;

  std::vector<std::string> atoms() const;

  friend bool operator==(const MltlFormula& a, const MltlFormula& b);

 private:
  explicit MltlFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct MltlFormula::Node {
  MltlOp op;
  std::string name;
  std::size_t lo;
  std::size_t hi;
  MltlFormula lhs;
  MltlFormula rhs;
  std::size_t size;
  std::size_t temporal_depth;
};

inline bool MltlFormula::valid() const noexcept { return node_ != nullptr; }
inline MltlOp MltlFormula::op() const { return node_->op; }
inline const std::string& MltlFormula::name() const { return node_->name; }
inline std::size_t MltlFormula::lo() const { return node_->lo; }
inline std::size_t MltlFormula::hi() const { return node_->hi; }
inline const MltlFormula& MltlFormula::lhs() const { return node_->lhs; }
inline const MltlFormula& MltlFormula::rhs() const { return node_->rhs; }
inline std::size_t MltlFormula::size() const noexcept { return node_ ? node_->size : 0; }
inline std::size_t MltlFormula::temporal_depth() const noexcept { return node_ ? node_->temporal_depth : 0; }

/// `F[lo,hi] f`, `G[lo,hi] f`, `f U[lo,hi] g` on top of the propositional
/// grammar of parse_formula. Until binds tighter than `&`.
MltlFormula parse_mltl(std::string_view text);
std::string format_mltl(const MltlFormula& f);

/// Finite-trace semantics: F and U are false once i + lo runs past the end
/// of the trace, G is the dual of F.
bool eval_mltl(const MltlFormula& f, const Trace& trace, std::size_t i);

/// G[0, len-1] (a -> F[0,t] c) at step 0.
bool eval_response(const Trace& trace, std::string_view antecedent,
                   std::string_view consequent, std::size_t t);

struct TraceDelay {
  std::string trace_id;
  std::size_t antecedents = 0;       // steps where the antecedent holds
  std::optional<std::size_t> delay;  // worst minimal delay; empty when unbounded or no antecedent
  bool unbounded = false;            // some antecedent is never followed by the consequent
};

struct BoundInference {
  std::string antecedent;
  std::string consequent;
  std::optional<std::size_t> t_star;
  std::vector<TraceDelay> per_trace;  // positive traces, input order
};

BoundInference infer_bound(const std::vector<Trace>& traces, std::string_view antecedent,
                           std::string_view consequent);

}  // namespace flminer
