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
#include <string>
#include <vector>

#include "flminer/feature_model.hpp"
#include "flminer/formula.hpp"

namespace flminer {

struct OperatorSet {
  bool negation = true;
  bool conjunction = true;
  bool disjunction = true;
  bool implication = false;
};

struct EnumerationConfig {
  std::vector<std::string> variables;
  std::size_t max_size = 7;
  std::size_t max_vars_per_formula = 3;
  OperatorSet operators;
};

/// The enumerator keeps one 64-bit truth table per class.
inline constexpr std::size_t kMaxVarsPerFormula = 6;

void validate_enumeration_config(const EnumerationConfig& config);

/// One size-minimal representative per class of contingent functions within
/// the caps. Two formulas share a class when they have the same truth table
/// over the variables they actually depend on. Ordered by size, then text.
/// The result does not depend on `workers`.
std::vector<BoolFormula> enumerate_formulas(const EnumerationConfig& config,
                                            std::size_t workers = 1);

/// Confusion counts plus the rates derived from them. j is Youden's J
/// (tpr + tnr - 1).
struct ScoreStats {
  std::size_t n_pos_sat = 0;
  std::size_t n_pos_unsat = 0;
  std::size_t n_neg_sat = 0;
  std::size_t n_neg_unsat = 0;
  std::size_t n_pos_skipped = 0;
  std::size_t n_neg_skipped = 0;
  double tpr = 0.0;
  double tnr = 0.0;
  double j = 0.0;
  bool tpr_defined = false;  // false when no positive row was evaluated
  bool tnr_defined = false;

  friend bool operator==(const ScoreStats&, const ScoreStats&) = default;
};

ScoreStats make_stats(std::size_t pos_sat, std::size_t pos_unsat, std::size_t neg_sat,
                      std::size_t neg_unsat, std::size_t pos_skipped, std::size_t neg_skipped);

struct FormulaScore {
  BoolFormula formula;
  std::string text;
  std::size_t size = 0;
  ScoreStats stats;

  friend bool operator==(const FormulaScore&, const FormulaScore&) = default;
};

/// Rows where any variable of `f` is missing are skipped.
FormulaScore score_formula(const BoolFormula& f, const BooleanizedDataset& data);

/// |j| descending, then size, then text.
bool ranks_before(const FormulaScore& a, const FormulaScore& b) noexcept;

/// Enumerates over `config.variables` (or, when empty, every variable of
/// `data` that is present in at least one row), scores and ranks.
std::vector<FormulaScore> mine(const EnumerationConfig& config, const BooleanizedDataset& data,
                               std::size_t top_k, std::size_t workers = 1);

}  // namespace flminer
