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

#include "flminer/feature_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "flminer/error.hpp"

namespace flminer {
namespace {

using nlohmann::json;

const std::vector<std::string> kSourcingCategories = {
    "Agriculture", "Fishing", "Mining", "Sex Work", "Clothing/Textiles", "Hospitality"};

FeatureSpec text(std::string key, std::string name) {
  return {std::move(key), std::move(name), FeatureKind::kText, {}, {}, {}};
}
FeatureSpec boolean(std::string key, std::string name) {
  return {std::move(key), std::move(name), FeatureKind::kBoolean, {}, {}, {}};
}

FeatureSchema make_default_schema() {
  std::vector<FeatureSpec> f;
  f.push_back(text("company", "Company"));
  f.push_back(text("product", "Product"));
  f.push_back(text("supply_chain", "Supply Chain"));
  f.push_back({"date_of_incident", "Date of Incident", FeatureKind::kDateRange, {}, {}, {}});
  f.push_back(text("industry", "Industry"));
  f.push_back(text("sic", "SIC"));
  f.push_back({"sourcing_characteristic", "Sourcing Characteristic", FeatureKind::kCategorical,
               kSourcingCategories, {}, {}});
  f.push_back(boolean("cross_border", "Product or service crosses national border"));
  f.push_back({"age_of_company", "Age of Company", FeatureKind::kInteger, {}, 0, {}});
  f.push_back(text("country_of_incident", "Country of Incident"));
  f.push_back(text("region_of_incident", "State/Region/Province of Incident"));
  f.push_back(boolean("high_risk_source", "High Risk Sourcing Country"));
  f.push_back(boolean("high_risk_product", "High Risk Product"));
  f.push_back(boolean("fake_documentation", "Concerns or Evidence of Fake/Forged Documentation"));
  f.push_back({"position_in_supply_chain", "Position in Supply Chain", FeatureKind::kInteger,
               {}, 1, 4});
  f.push_back(boolean("raw_material_supplier", "Raw Material Supplier"));
  f.push_back(boolean("firm_provided_housing", "Firm provided housing"));
  f.push_back(boolean("firm_provided_transportation", "Firm provided transportation"));
  f.push_back(boolean("forced_labor_detected", "Forced Labor Detected"));
  f.push_back(boolean("slave_labor_detected", "Slave Labor Detected"));
  f.push_back(boolean("child_labor_detected", "Child Labor Detected"));
  f.push_back(boolean("mandatory_overtime", "Mandatory Overtime"));
  f.push_back(boolean("sex_trafficking", "Sex Trafficking"));
  f.push_back(boolean("prison_labor_voluntary", "Prison Labor - Voluntary"));
  f.push_back(boolean("prison_labor_forced", "Prison Labor - Forced"));
  return FeatureSchema(std::move(f));
}

bool valid_date(const Date& d) {
  if (d.month < 1 || d.month > 12 || d.day < 1) return false;
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  unsigned max_day = kDays[d.month - 1];
  const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
  if (d.month == 2 && leap) max_day = 29;
  return d.day <= max_day;
}

FeatureKind kind_of(const FeatureValue& v) {
  struct Visitor {
    FeatureKind operator()(const Missing&) const { return FeatureKind::kText; }
    FeatureKind operator()(const TextValue&) const { return FeatureKind::kText; }
    FeatureKind operator()(const DateRange&) const { return FeatureKind::kDateRange; }
    FeatureKind operator()(std::int64_t) const { return FeatureKind::kInteger; }
    FeatureKind operator()(TriState) const { return FeatureKind::kBoolean; }
    FeatureKind operator()(const CategoryValue&) const { return FeatureKind::kCategorical; }
  };
  return std::visit(Visitor{}, v);
}

[[noreturn]] void bad_value(std::size_t row, std::string_view key, std::string_view reason) {
  throw Error(ErrorCode::kBadValue, fmt::format("row {}, column {}: {}", row, key, reason));
}

std::vector<std::string> split_ids(std::string_view cell) {
  std::vector<std::string> ids;
  if (cell.empty()) return ids;
  std::size_t start = 0;
  while (true) {
    const auto pos = cell.find(';', start);
    ids.emplace_back(cell.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return ids;
}

bool blank_row(const csv::Row& row) { return row.size() == 1 && row[0].empty(); }

}  // namespace

std::string_view feature_kind_name(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::kText: return "text";
    case FeatureKind::kDateRange: return "date_range";
    case FeatureKind::kInteger: return "integer";
    case FeatureKind::kBoolean: return "boolean";
    case FeatureKind::kCategorical: return "categorical";
  }
  return "text";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) noexcept {
  for (auto k : {FeatureKind::kText, FeatureKind::kDateRange, FeatureKind::kInteger,
                 FeatureKind::kBoolean, FeatureKind::kCategorical}) {
    if (feature_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features) : features_(std::move(features)) {}

const FeatureSpec* FeatureSchema::find(std::string_view key) const noexcept {
  for (const auto& f : features_) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

const FeatureSchema& FeatureSchema::default_schema() {
  static const FeatureSchema schema = make_default_schema();
  return schema;
}

FeatureSchema FeatureSchema::from_json(std::string_view text) {
  std::vector<FeatureSpec> specs;
  try {
    const json doc = json::parse(text);
    for (const auto& item : doc.at("features")) {
      FeatureSpec spec;
      spec.key = item.at("key").get<std::string>();
      spec.display_name = item.value("display_name", spec.key);
      const auto kind_name = item.at("kind").get<std::string>();
      const auto kind = parse_feature_kind(kind_name);
      if (!kind) throw Error(ErrorCode::kInvalidSchema, "unknown feature kind " + kind_name);
      spec.kind = *kind;
      if (item.contains("categories")) {
        spec.allowed_categories = item["categories"].get<std::vector<std::string>>();
      }
      if (item.contains("min")) spec.min_value = item["min"].get<std::int64_t>();
      if (item.contains("max")) spec.max_value = item["max"].get<std::int64_t>();
      specs.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSchema, std::string("schema file: ") + e.what());
  }
  FeatureSchema schema(std::move(specs));
  if (auto problems = validate_schema(schema); !problems.empty()) {
    throw Error(ErrorCode::kInvalidSchema, problems.front());
  }
  return schema;
}

std::string FeatureSchema::to_json() const {
  json features = json::array();
  for (const auto& f : features_) {
    json item = {{"key", f.key}, {"display_name", f.display_name},
                 {"kind", feature_kind_name(f.kind)}};
    if (!f.allowed_categories.empty()) item["categories"] = f.allowed_categories;
    if (f.min_value) item["min"] = *f.min_value;
    if (f.max_value) item["max"] = *f.max_value;
    features.push_back(std::move(item));
  }
  return json{{"features", features}}.dump(2);
}

std::vector<std::string> validate_schema(const FeatureSchema& schema) {
  std::vector<std::string> problems;
  if (schema.size() != kFeatureCount) {
    problems.push_back(fmt::format("schema has {} features, expected {}", schema.size(),
                                   kFeatureCount));
  }
  std::set<std::string, std::less<>> seen;
  for (const auto& f : schema.features()) {
    if (f.key.empty()) problems.push_back("empty feature key");
    if (!seen.insert(f.key).second) problems.push_back("duplicate feature key " + f.key);
    if (f.kind == FeatureKind::kCategorical && f.allowed_categories.empty()) {
      problems.push_back("categorical feature " + f.key + " has no categories");
    }
    if (f.kind != FeatureKind::kCategorical && !f.allowed_categories.empty()) {
      problems.push_back("non-categorical feature " + f.key + " lists categories");
    }
    if (f.min_value && f.max_value && *f.min_value > *f.max_value) {
      problems.push_back("feature " + f.key + " has min > max");
    }
  }
  return problems;
}

std::optional<Date> parse_date(std::string_view s) noexcept {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len, auto& out) {
    const auto* first = s.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
  };
  Date d;
  if (!num(0, 4, d.year) || !num(5, 2, d.month) || !num(8, 2, d.day)) return std::nullopt;
  if (!valid_date(d)) return std::nullopt;
  return d;
}

std::string format_date(const Date& d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", d.year, d.month, d.day);
}

const FeatureValue& IncidentRecord::value(std::string_view key) const {
  static const FeatureValue kMissing = Missing{};
  auto it = values.find(key);
  return it == values.end() ? kMissing : it->second;
}

std::vector<Violation> validate_record(const IncidentRecord& record,
                                       const FeatureSchema& schema) {
  std::vector<Violation> out;
  if (record.incident_id.empty()) out.push_back({"incident_id", "empty incident id"});
  for (const auto& [key, value] : record.values) {
    const FeatureSpec* spec = schema.find(key);
    if (!spec) {
      out.push_back({key, "unknown feature"});
      continue;
    }
    if (is_missing(value)) continue;
    if (kind_of(value) != spec->kind) {
      out.push_back({key, fmt::format("expected {} value", feature_kind_name(spec->kind))});
      continue;
    }
    switch (spec->kind) {
      case FeatureKind::kText:
        if (std::get<TextValue>(value).text.empty()) out.push_back({key, "empty text"});
        break;
      case FeatureKind::kDateRange: {
        const auto& r = std::get<DateRange>(value);
        if (!valid_date(r.start) || !valid_date(r.end)) {
          out.push_back({key, "invalid calendar date"});
        } else if (r.end < r.start) {
          out.push_back({key, "date range start after end"});
        }
        break;
      }
      case FeatureKind::kInteger: {
        const auto v = std::get<std::int64_t>(value);
        if (spec->min_value && v < *spec->min_value) {
          out.push_back({key, fmt::format("value {} below minimum {}", v, *spec->min_value)});
        } else if (spec->max_value && v > *spec->max_value) {
          out.push_back({key, fmt::format("value {} above maximum {}", v, *spec->max_value)});
        }
        break;
      }
      case FeatureKind::kBoolean:
        break;
      case FeatureKind::kCategorical: {
        const auto& label = std::get<CategoryValue>(value).label;
        if (std::find(spec->allowed_categories.begin(), spec->allowed_categories.end(), label) ==
            spec->allowed_categories.end()) {
          out.push_back({key, "category not allowed: " + label});
        }
        break;
      }
    }
  }
  return out;
}

std::vector<Violation> validate_dataset(const LabeledDataset& dataset) {
  std::vector<Violation> out;
  std::set<std::string, std::less<>> ids;
  for (const auto& r : dataset.records) {
    if (!ids.insert(r.incident_id).second) {
      out.push_back({"incident_id", "duplicate incident id " + r.incident_id});
    }
    for (auto& v : validate_record(r, dataset.schema)) {
      out.push_back({r.incident_id + "." + v.key, v.rule});
    }
  }
  return out;
}

IntegerStats integer_stats(const LabeledDataset& dataset, std::string_view key) {
  const FeatureSpec* spec = dataset.schema.find(key);
  if (!spec || spec->kind != FeatureKind::kInteger) {
    throw Error(ErrorCode::kUnknownFeature, fmt::format("no integer feature '{}'", key));
  }
  std::vector<double> xs;
  for (const auto& r : dataset.records) {
    if (const auto* v = std::get_if<std::int64_t>(&r.value(key))) {
      xs.push_back(static_cast<double>(*v));
    }
  }
  if (xs.empty()) {
    throw Error(ErrorCode::kAllMissing, fmt::format("feature '{}' has no values", key));
  }
  IntegerStats s;
  s.n = xs.size();
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::vector<bool> two_sigma_outliers(const std::vector<std::int64_t>& values) {
  const std::size_t n = values.size();
  std::vector<bool> out(n, false);
  if (n < 2) return out;
  constexpr std::int64_t kExactLimit = std::int64_t{1} << 31;
  const bool exact = n < (std::size_t{1} << 20) &&
                     std::all_of(values.begin(), values.end(), [](std::int64_t v) {
                       return v > -kExactLimit && v < kExactLimit;
                     });
  if (exact) {
    // With S = sum, Q = sum of squares: |v - S/n| > 2 sd  <=>
    // (n v - S)^2 (n - 1) > 4 n (n Q - S^2).
    using i128 = __int128;
    i128 sum = 0, sq = 0;
    for (std::int64_t v : values) {
      sum += v;
      sq += static_cast<i128>(v) * v;
    }
    const i128 nn = static_cast<i128>(n);
    const i128 spread = nn * sq - sum * sum;
    if (spread == 0) return out;
    const i128 bound = 4 * nn * spread;
    for (std::size_t i = 0; i < n; ++i) {
      const i128 d = nn * values[i] - sum;
      out[i] = d * d * (nn - 1) > bound;
    }
    return out;
  }
  long double sum = 0;
  for (std::int64_t v : values) sum += static_cast<long double>(v);
  const long double mean = sum / static_cast<long double>(n);
  long double ss = 0;
  for (std::int64_t v : values) ss += (v - mean) * (v - mean);
  const long double sd = std::sqrt(ss / static_cast<long double>(n - 1));
  if (sd == 0) return out;
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(values[i] - mean) > 2 * sd;
  return out;
}

std::optional<std::size_t> BooleanizedDataset::variable_index(
    std::string_view name) const noexcept {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == name) return i;
  }
  return std::nullopt;
}

std::string slugify(std::string_view text) {
  std::string out;
  bool pending_sep = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

BooleanizedDataset booleanize(const LabeledDataset& dataset) {
  BooleanizedDataset out;
  const auto n = dataset.records.size();
  out.rows.assign(n, {});
  for (const auto& r : dataset.records) {
    out.incident_ids.push_back(r.incident_id);
    out.labels.push_back(r.label);
  }

  auto add_column = [&](std::string name, auto&& cell_of) {
    out.variables.push_back(std::move(name));
    for (std::size_t i = 0; i < n; ++i) out.rows[i].push_back(cell_of(dataset.records[i]));
  };

  for (const auto& spec : dataset.schema.features()) {
    switch (spec.kind) {
      case FeatureKind::kText:
      case FeatureKind::kDateRange:
        break;
      case FeatureKind::kBoolean:
        add_column(spec.key, [&](const IncidentRecord& r) {
          const auto* t = std::get_if<TriState>(&r.value(spec.key));
          if (!t || *t == TriState::kNotApplicable) return Cell::kMissing;
          return *t == TriState::kYes ? Cell::kTrue : Cell::kFalse;
        });
        break;
      case FeatureKind::kInteger: {
        std::vector<std::int64_t> present;
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i) {
          if (const auto* v = std::get_if<std::int64_t>(&dataset.records[i].value(spec.key))) {
            present.push_back(*v);
            rows.push_back(i);
          }
        }
        const std::vector<bool> flags = two_sigma_outliers(present);
        std::vector<Cell> column(n, Cell::kMissing);
        for (std::size_t k = 0; k < rows.size(); ++k) {
          column[rows[k]] = flags[k] ? Cell::kTrue : Cell::kFalse;
        }
        std::size_t row = 0;
        add_column(spec.key + "_outlier", [&](const IncidentRecord&) { return column[row++]; });
        break;
      }
      case FeatureKind::kCategorical:
        for (const auto& category : spec.allowed_categories) {
          add_column(spec.key + "_" + slugify(category), [&](const IncidentRecord& r) {
            const auto* c = std::get_if<CategoryValue>(&r.value(spec.key));
            if (!c) return Cell::kMissing;
            return c->label == category ? Cell::kTrue : Cell::kFalse;
          });
        }
        break;
    }
  }
  return out;
}

std::string encode_value(const FeatureValue& value) {
  struct Visitor {
    std::string operator()(const Missing&) const { return {}; }
    std::string operator()(const TextValue& t) const { return t.text; }
    std::string operator()(const DateRange& r) const {
      return format_date(r.start) + "/" + format_date(r.end);
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(TriState t) const {
      switch (t) {
        case TriState::kYes: return "Y";
        case TriState::kNo: return "N";
        case TriState::kNotApplicable: return "NA";
      }
      return {};
    }
    std::string operator()(const CategoryValue& c) const { return c.label; }
  };
  return std::visit(Visitor{}, value);
}

FeatureValue decode_value(const FeatureSpec& spec, std::string_view cell) {
  if (cell.empty()) return Missing{};
  auto fail = [&](std::string_view reason) -> FeatureValue {
    throw Error(ErrorCode::kBadValue, fmt::format("{}: {} ('{}')", spec.key, reason, cell));
  };
  switch (spec.kind) {
    case FeatureKind::kText:
      return TextValue{std::string(cell)};
    case FeatureKind::kCategorical:
      return CategoryValue{std::string(cell)};
    case FeatureKind::kInteger: {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) return fail("not an integer");
      return v;
    }
    case FeatureKind::kBoolean:
      if (cell == "Y") return TriState::kYes;
      if (cell == "N") return TriState::kNo;
      if (cell == "NA") return TriState::kNotApplicable;
      return fail("expected Y, N or NA");
    case FeatureKind::kDateRange: {
      const auto slash = cell.find('/');
      if (slash == std::string_view::npos) return fail("expected YYYY-MM-DD/YYYY-MM-DD");
      auto start = parse_date(cell.substr(0, slash));
      auto end = parse_date(cell.substr(slash + 1));
      if (!start || !end) return fail("expected YYYY-MM-DD/YYYY-MM-DD");
      return DateRange{*start, *end};
    }
  }
  return Missing{};
}

LabeledDataset parse_incident_csv(std::string_view bytes, const FeatureSchema& schema) {
  const auto rows = csv::parse(bytes);
  if (rows.empty()) throw Error(ErrorCode::kMalformedHeader, "missing header row");

  csv::Row expected = {"incident_id", "label", "source_article_ids"};
  for (const auto& f : schema.features()) expected.push_back(f.key);
  if (rows[0] != expected) {
    throw Error(ErrorCode::kMalformedHeader,
                "header must be incident_id,label,source_article_ids followed by the schema keys");
  }

  LabeledDataset ds{schema, {}};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (blank_row(row)) continue;
    if (row.size() != expected.size()) {
      bad_value(r, "*", fmt::format("expected {} cells, found {}", expected.size(), row.size()));
    }
    IncidentRecord rec;
    rec.incident_id = row[0];
    if (row[1] == "pos") {
      rec.label = Label::kPositive;
    } else if (row[1] == "neg") {
      rec.label = Label::kNegative;
    } else {
      bad_value(r, "label", "expected pos or neg");
    }
    rec.source_article_ids = split_ids(row[2]);
    for (std::size_t k = 0; k < schema.size(); ++k) {
      const auto& spec = schema.features()[k];
      try {
        FeatureValue v = decode_value(spec, row[k + 3]);
        if (!is_missing(v)) rec.values[spec.key] = std::move(v);
      } catch (const Error& e) {
        bad_value(r, spec.key, e.what());
      }
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

std::string write_incident_csv(const LabeledDataset& dataset) {
  std::string out;
  csv::Row header = {"incident_id", "label", "source_article_ids"};
  for (const auto& f : dataset.schema.features()) header.push_back(f.key);
  csv::append_row(out, header);
  for (const auto& rec : dataset.records) {
    csv::Row row;
    row.push_back(rec.incident_id);
    row.push_back(rec.label == Label::kPositive ? "pos" : "neg");
    std::string ids;
    for (std::size_t i = 0; i < rec.source_article_ids.size(); ++i) {
      if (i) ids.push_back(';');
      ids += rec.source_article_ids[i];
    }
    row.push_back(std::move(ids));
    for (const auto& f : dataset.schema.features()) row.push_back(encode_value(rec.value(f.key)));
    csv::append_row(out, row);
  }
  return out;
}

BooleanizedDataset parse_booleanized_csv(std::string_view bytes) {
  const auto rows = csv::parse(bytes);
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "incident_id" ||
      rows[0][1] != "label") {
    throw Error(ErrorCode::kMalformedHeader, "header must start with incident_id,label");
  }
  BooleanizedDataset data;
  data.variables.assign(rows[0].begin() + 2, rows[0].end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (blank_row(row)) continue;
    if (row.size() != rows[0].size()) bad_value(r, "*", "cell count differs from header");
    data.incident_ids.push_back(row[0]);
    if (row[1] == "pos") {
      data.labels.push_back(Label::kPositive);
    } else if (row[1] == "neg") {
      data.labels.push_back(Label::kNegative);
    } else {
      bad_value(r, "label", "expected pos or neg");
    }
    std::vector<Cell> cells;
    for (std::size_t c = 2; c < row.size(); ++c) {
      if (row[c] == "1") {
        cells.push_back(Cell::kTrue);
      } else if (row[c] == "0") {
        cells.push_back(Cell::kFalse);
      } else if (row[c].empty()) {
        cells.push_back(Cell::kMissing);
      } else {
        bad_value(r, data.variables[c - 2], "expected 1, 0 or empty");
      }
    }
    data.rows.push_back(std::move(cells));
  }
  return data;
}

std::string write_booleanized_csv(const BooleanizedDataset& data) {
  std::string out;
  csv::Row header = {"incident_id", "label"};
  header.insert(header.end(), data.variables.begin(), data.variables.end());
  csv::append_row(out, header);
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    csv::Row row = {data.incident_ids[r], data.labels[r] == Label::kPositive ? "pos" : "neg"};
    for (Cell c : data.rows[r]) {
      row.push_back(c == Cell::kTrue ? "1" : c == Cell::kFalse ? "0" : "");
    }
    csv::append_row(out, row);
  }
  return out;
}

}  // namespace flminer

namespace flminer {

std::string_view label_name(Label label) noexcept {
  return label == Label::kPositive ? "pos" : "neg";
}

std::optional<Label> parse_label(std::string_view name) noexcept {
  if (name == "pos") return Label::kPositive;
  if (name == "neg") return Label::kNegative;
  return std::nullopt;
}

}  // namespace flminer
