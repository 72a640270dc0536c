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
#include <vector>

#include <nlohmann/json.hpp>

#include "flminer/corpus_store.hpp"
#include "flminer/feature_model.hpp"
#include "flminer/formula_miner.hpp"
#include "flminer/temporal_miner.hpp"

namespace flminer {

/// Fixed six decimals; "NA" for an undefined rate.
std::string format_rate(double value, bool defined = true);

/// Tab-separated ranking. The first line is a `#` comment naming the metric;
/// columns: rank, formula, size, tpr, tnr, j, n_pos_sat, n_pos_unsat,
/// n_neg_sat, n_neg_unsat, n_pos_skipped, n_neg_skipped.
std::string mining_report_tsv(const std::vector<FormulaScore>& ranked);
nlohmann::json mining_report_json(const std::vector<FormulaScore>& ranked);

/// As above with a `bounds` column after `formula` (`[lo,hi]` list, outermost first).
std::string temporal_report_tsv(const std::vector<TemporalScore>& ranked);
nlohmann::json temporal_report_json(const std::vector<TemporalScore>& ranked);

/// One evaluation_to_json object per line.
std::string evaluations_jsonl(const std::vector<EvaluationRecord>& records);

struct FeatureCoverage {
  std::string key;
  FeatureKind kind = FeatureKind::kText;
  std::size_t present_pos = 0;
  std::size_t present_neg = 0;
};

struct VariablePrevalence {
  std::string name;
  std::size_t true_pos = 0;
  std::size_t true_neg = 0;
  std::size_t missing = 0;
};

struct DatasetSummary {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t violations = 0;
  std::vector<FeatureCoverage> features;
  std::vector<VariablePrevalence> variables;
};

/// Throws DegenerateDataset when the dataset has no records.
DatasetSummary summarize_dataset(const LabeledDataset& dataset);
std::string dataset_summary_markdown(const DatasetSummary& summary);

}  // namespace flminer
