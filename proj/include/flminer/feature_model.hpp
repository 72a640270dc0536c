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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace flminer {

enum class FeatureKind { kText, kDateRange, kInteger, kBoolean, kCategorical };

std::string_view feature_kind_name(FeatureKind kind) noexcept;
std::optional<FeatureKind> parse_feature_kind(std::string_view name) noexcept;

struct FeatureSpec {
  std::string key;
  std::string display_name;
  FeatureKind kind = FeatureKind::kText;
  std::vector<std::string> allowed_categories;  // categorical only
  std::optional<std::int64_t> min_value;        // integer only
  std::optional<std::int64_t> max_value;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

inline constexpr std::size_t kFeatureCount = 25;

class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureSpec> features);

  const std::vector<FeatureSpec>& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return features_.size(); }
  const FeatureSpec* find(std::string_view key) const noexcept;

  /// The built-in 25-feature incident schema.
  static const FeatureSchema& default_schema();

  /// Parses `{"features": [{"key", "display_name", "kind", "categories",
  /// "min", "max"}, ...]}` and checks it with validate_schema.
  static FeatureSchema from_json(std::string_view text);
  std::string to_json() const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

 private:
  std::vector<FeatureSpec> features_;
};

/// Empty iff the schema has exactly 25 uniquely keyed, well-formed features.
std::vector<std::string> validate_schema(const FeatureSchema& schema);

struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
};

std::optional<Date> parse_date(std::string_view text) noexcept;
std::string format_date(const Date& date);

struct DateRange {
  Date start;
  Date end;
  friend bool operator==(const DateRange&, const DateRange&) = default;
};

enum class TriState { kYes, kNo, kNotApplicable };

struct Missing {
  friend bool operator==(Missing, Missing) = default;
};
struct TextValue {
  std::string text;
  friend bool operator==(const TextValue&, const TextValue&) = default;
};
struct CategoryValue {
  std::string label;
  friend bool operator==(const CategoryValue&, const CategoryValue&) = default;
};

using FeatureValue =
    std::variant<Missing, TextValue, DateRange, std::int64_t, TriState, CategoryValue>;

inline bool is_missing(const FeatureValue& v) noexcept {
  return std::holds_alternative<Missing>(v);
}

enum class Label { kPositive, kNegative };

/// "pos" / "neg".
std::string_view label_name(Label label) noexcept;
std::optional<Label> parse_label(std::string_view name) noexcept;

struct IncidentRecord {
  std::string incident_id;
  Label label = Label::kPositive;
  std::map<std::string, FeatureValue, std::less<>> values;
  std::vector<std::string> source_article_ids;

  /// Missing when the key is absent.
  const FeatureValue& value(std::string_view key) const;

  friend bool operator==(const IncidentRecord&, const IncidentRecord&) = default;
};

struct LabeledDataset {
  FeatureSchema schema;
  std::vector<IncidentRecord> records;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct Violation {
  std::string key;
  std::string rule;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_record(const IncidentRecord& record,
                                       const FeatureSchema& schema);

/// Duplicate incident ids plus every record-level violation, prefixed with the id.
std::vector<Violation> validate_dataset(const LabeledDataset& dataset);

struct IntegerStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation; 0 when n == 1
  std::size_t n = 0;
};

IntegerStats integer_stats(const LabeledDataset& dataset, std::string_view key);

/// Flags values with |v - mean| > 2 * sample stddev, decided in integer
/// arithmetic so that values on the band edge are never misclassified. All
/// false when there are fewer than two values or the stddev is 0.
std::vector<bool> two_sigma_outliers(const std::vector<std::int64_t>& values);

enum class Cell : std::uint8_t { kFalse, kTrue, kMissing };

struct BooleanizedDataset {
  std::vector<std::string> variables;
  std::vector<std::string> incident_ids;
  std::vector<Label> labels;
  std::vector<std::vector<Cell>> rows;  // rows[r][v] aligned with `variables`

  std::optional<std::size_t> variable_index(std::string_view name) const noexcept;

  friend bool operator==(const BooleanizedDataset&, const BooleanizedDataset&) = default;
};

/// Lowercases and maps every run of non-alphanumerics to a single '_'.
std::string slugify(std::string_view text);

BooleanizedDataset booleanize(const LabeledDataset& dataset);

// Incident CSV: incident_id,label,source_article_ids then the schema keys.
LabeledDataset parse_incident_csv(std::string_view bytes,
                                  const FeatureSchema& schema = FeatureSchema::default_schema());
std::string write_incident_csv(const LabeledDataset& dataset);

// Booleanized CSV: incident_id,label then variables; cells 1, 0 or empty.
BooleanizedDataset parse_booleanized_csv(std::string_view bytes);
std::string write_booleanized_csv(const BooleanizedDataset& data);

/// Value encoding shared by CSV cells and JSON feature payloads.
std::string encode_value(const FeatureValue& value);
FeatureValue decode_value(const FeatureSpec& spec, std::string_view cell);

}  // namespace flminer
