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

#include "flminer/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "flminer/error.hpp"

namespace flminer {
namespace {

using nlohmann::json;

constexpr const char* kMetricComment =
    "# metric: youden_j = tpr + tnr - 1; ranked by |j| desc, size asc, formula asc\n";

std::string counts_tsv(const ScoreStats& s) {
  return fmt::format("{}\t{}\t{}\t{}\t{}\t{}", s.n_pos_sat, s.n_pos_unsat, s.n_neg_sat,
                     s.n_neg_unsat, s.n_pos_skipped, s.n_neg_skipped);
}

json stats_json(const ScoreStats& s) {
  return {{"tpr", s.tpr_defined ? json(s.tpr) : json(nullptr)},
          {"tnr", s.tnr_defined ? json(s.tnr) : json(nullptr)},
          {"j", s.j},
          {"n_pos_sat", s.n_pos_sat},
          {"n_pos_unsat", s.n_pos_unsat},
          {"n_neg_sat", s.n_neg_sat},
          {"n_neg_unsat", s.n_neg_unsat},
          {"n_pos_skipped", s.n_pos_skipped},
          {"n_neg_skipped", s.n_neg_skipped}};
}

std::string bounds_text(const std::vector<Interval>& bounds) {
  std::string out;
  for (const auto& [lo, hi] : bounds) {
    if (!out.empty()) out += ' ';
    out += fmt::format("[{},{}]", lo, hi);
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::string format_rate(double value, bool defined) {
  if (!defined || std::isnan(value)) return "NA";
  // Avoid printing -0.000000.
  if (value == 0.0) value = 0.0;
  return fmt::format("{:.6f}", value);
}

std::string mining_report_tsv(const std::vector<FormulaScore>& ranked) {
  std::string out = kMetricComment;
  out +=
      "rank\tformula\tsize\ttpr\ttnr\tj\tn_pos_sat\tn_pos_unsat\tn_neg_sat\tn_neg_unsat\t"
      "n_pos_skipped\tn_neg_skipped\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", i + 1, r.text, r.size,
                       format_rate(r.stats.tpr, r.stats.tpr_defined),
                       format_rate(r.stats.tnr, r.stats.tnr_defined), format_rate(r.stats.j),
                       counts_tsv(r.stats));
  }
  return out;
}

json mining_report_json(const std::vector<FormulaScore>& ranked) {
  json rows = json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    json row = {{"rank", i + 1}, {"formula", ranked[i].text}, {"size", ranked[i].size}};
    row.update(stats_json(ranked[i].stats));
    rows.push_back(std::move(row));
  }
  return {{"metric", "youden_j"}, {"ranking", "abs_j_desc,size_asc,formula_asc"}, {"results", rows}};
}

std::string temporal_report_tsv(const std::vector<TemporalScore>& ranked) {
  std::string out = kMetricComment;
  out +=
      "rank\tformula\tbounds\tsize\ttpr\ttnr\tj\tn_pos_sat\tn_pos_unsat\tn_neg_sat\t"
      "n_neg_unsat\tn_pos_skipped\tn_neg_skipped\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", i + 1, r.text, bounds_text(r.bounds),
                       r.size, format_rate(r.stats.tpr, r.stats.tpr_defined),
                       format_rate(r.stats.tnr, r.stats.tnr_defined), format_rate(r.stats.j),
                       counts_tsv(r.stats));
  }
  return out;
}

json temporal_report_json(const std::vector<TemporalScore>& ranked) {
  json rows = json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    json bounds = json::array();
    for (const auto& [lo, hi] : ranked[i].bounds) bounds.push_back({lo, hi});
    json row = {{"rank", i + 1},
                {"formula", ranked[i].text},
                {"bounds", bounds},
                {"size", ranked[i].size}};
    row.update(stats_json(ranked[i].stats));
    rows.push_back(std::move(row));
  }
  return {{"metric", "youden_j"}, {"ranking", "abs_j_desc,size_asc,formula_asc"}, {"results", rows}};
}

std::string evaluations_jsonl(const std::vector<EvaluationRecord>& records) {
  std::string out;
  for (const auto& r : records) out += evaluation_to_json(r).dump() + "\n";
  return out;
}

DatasetSummary summarize_dataset(const LabeledDataset& dataset) {
  if (dataset.records.empty()) {
    throw Error(ErrorCode::kDegenerateDataset, "dataset has no incident records");
  }
  DatasetSummary s;
  for (const auto& spec : dataset.schema.features()) s.features.push_back({spec.key, spec.kind, 0, 0});
  for (const auto& rec : dataset.records) {
    (rec.label == Label::kPositive ? s.n_pos : s.n_neg)++;
    for (auto& f : s.features) {
      if (is_missing(rec.value(f.key))) continue;
      (rec.label == Label::kPositive ? f.present_pos : f.present_neg)++;
    }
  }
  s.violations = validate_dataset(dataset).size();

  const BooleanizedDataset b = booleanize(dataset);
  for (std::size_t v = 0; v < b.variables.size(); ++v) {
    VariablePrevalence p{b.variables[v], 0, 0, 0};
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      const Cell c = b.rows[r][v];
      if (c == Cell::kMissing) {
        ++p.missing;
      } else if (c == Cell::kTrue) {
        (b.labels[r] == Label::kPositive ? p.true_pos : p.true_neg)++;
      }
    }
    s.variables.push_back(std::move(p));
  }
  return s;
}

std::string dataset_summary_markdown(const DatasetSummary& s) {
  std::string out = "# Dataset summary\n\n";
  out += fmt::format("- incidents: {} ({} pos, {} neg)\n", s.n_pos + s.n_neg, s.n_pos, s.n_neg);
  out += fmt::format("- validation violations: {}\n\n", s.violations);
  out += "## Feature coverage\n\n| feature | present (pos) | present (neg) |\n|---|---|---|\n";
  for (const auto& f : s.features) {
    out += fmt::format("| {} | {} | {} |\n", f.key, f.present_pos, f.present_neg);
  }
  out += "\n## Boolean variables\n\n| variable | true (pos) | true (neg) | missing |\n|---|---|---|---|\n";
  for (const auto& v : s.variables) {
    out += fmt::format("| {} | {} | {} | {} |\n", v.name, v.true_pos, v.true_neg, v.missing);
  }
  return out;
}

}  // namespace flminer
