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
#include <string>
#include <utility>
#include <vector>

#include "flminer/formula_miner.hpp"
#include "flminer/mltl.hpp"

namespace flminer {

struct TemporalConfig {
  std::vector<std::string> variables;  // empty: every variable shared by all traces
  std::size_t max_size = 5;
  std::size_t max_temporal_depth = 1;
  std::size_t max_vars_per_formula = 2;
  std::vector<std::size_t> lower_bounds = {0};
  std::vector<std::size_t> upper_bounds = {0, 1, 2, 3, 5, 10};
  bool infer_bounds = true;  // add t_star of every ordered variable pair to upper_bounds
  bool use_finally = true;
  bool use_globally = true;
  OperatorSet operators;
  bool dedup_equivalent = true;  // keep the best-ranked formula per data signature
};

using Interval = std::pair<std::size_t, std::size_t>;

/// Sorted intervals [lo, hi], lo from lower_bounds, hi from upper_bounds
/// plus any inferred t_star values, lo <= hi.
std::vector<Interval> resolve_intervals(const TemporalConfig& config,
                                        const std::vector<std::string>& variables,
                                        const std::vector<Trace>& traces);

/// Syntactic candidate set: atoms, !, &, |, F and G over `intervals`, within
/// max_size, max_temporal_depth and max_vars_per_formula. Skips !!f, f op f
/// and the mirrored operand order of & and |. Ordered by size, then
/// generation order.
std::vector<MltlFormula> enumerate_temporal(const TemporalConfig& config,
                                            const std::vector<std::string>& variables,
                                            const std::vector<Interval>& intervals);

struct TemporalScore {
  MltlFormula formula;
  std::string text;
  std::size_t size = 0;
  std::vector<Interval> bounds;  // intervals used, outermost first
  ScoreStats stats;

  friend bool operator==(const TemporalScore&, const TemporalScore&) = default;
};

/// |j| descending, then size, then text.
bool ranks_before(const TemporalScore& a, const TemporalScore& b) noexcept;

/// Evaluates `f` at step 0 of every trace and scores against the labels.
TemporalScore score_temporal(const MltlFormula& f, const std::vector<Trace>& traces);

/// Enumerates, evaluates at step 0 per trace, drops formulas constant across
/// the trace set, ranks by |j|.
std::vector<TemporalScore> mine_temporal(const TemporalConfig& config,
                                         const std::vector<Trace>& traces, std::size_t top_k,
                                         std::size_t workers = 1);

}  // namespace flminer
