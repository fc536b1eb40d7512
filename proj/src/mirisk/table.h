// Copyright 2026 The MIRisk Authors
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

// Schema-typed tables and the labelled attack dataset built from a training
// table and an unseen table.
//
// A table is stored column-wise. Numeric columns hold finite doubles,
// categorical columns hold the raw token strings. Missing values are not
// representable: the loader rejects empty cells.

#ifndef MIRISK_TABLE_H_
#define MIRISK_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mirisk {

enum class FeatureKind { kNumeric, kCategorical };

const char* FeatureKindName(FeatureKind kind);

struct NumericRange {
  double min = 0.0;
  double max = 0.0;

  double width() const { return max - min; }
  bool operator==(const NumericRange&) const = default;
};

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Numeric features only. Either declared in a schema file
  // (`range_declared`) or filled in from the observed values on load.
  std::optional<NumericRange> range;
  bool range_declared = false;
};

using Schema = std::vector<FeatureSpec>;

// Unique names, min <= max on every range, no range on categorical features.
absl::Status ValidateSchema(const Schema& schema);

// True when both schemas list the same names with the same kinds in the same
// order. Ranges are ignored.
bool SameLayout(const Schema& a, const Schema& b);

// Reads a schema file. One feature per line:
//
//   # comment
//   age = numeric 0 120
//   income = numeric
//   sex = categorical
//
// The optional pair after `numeric` declares the (min, max) normalisation
// range for that feature.
absl::StatusOr<Schema> LoadSchema(const std::string& path);
absl::StatusOr<Schema> ParseSchema(const std::vector<std::string>& lines);

using Cell = std::variant<double, std::string>;

class Table {
 public:
  // Validates shape and cell kinds. Numeric ranges that were not declared are
  // replaced by the observed (min, max).
  static absl::StatusOr<Table> FromRows(
      Schema schema, const std::vector<std::vector<Cell>>& rows);

  // Rows of `a` followed by rows of `b`. Layouts must match.
  static absl::StatusOr<Table> Concat(const Table& a, const Table& b);

  const Schema& schema() const { return schema_; }
  size_t num_rows() const { return num_rows_; }
  size_t num_features() const { return schema_.size(); }

  double numeric(size_t row, size_t feature) const {
    return numeric_[feature][row];
  }
  const std::string& category(size_t row, size_t feature) const {
    return categorical_[feature][row];
  }
  Cell cell(size_t row, size_t feature) const;

  // New table holding the given rows in the given order.
  Table Select(const std::vector<size_t>& rows) const;

  // Canonical key of one row; equal keys iff all cells are equal.
  std::string RowKey(size_t row) const;

 private:
  Table() = default;
  void RefreshObservedRanges();

  Schema schema_;
  size_t num_rows_ = 0;
  // Indexed by feature; only the vector matching the feature kind is used.
  std::vector<std::vector<double>> numeric_;
  std::vector<std::vector<std::string>> categorical_;
};

// Loads a comma-separated file with a header row. Without a schema every
// column whose cells all parse as finite reals is numeric and all others are
// categorical.
absl::StatusOr<Table> LoadTable(const std::string& path,
                                const std::optional<Schema>& schema);
absl::StatusOr<Table> ParseTable(const std::vector<std::string>& lines,
                                 const std::optional<Schema>& schema);

std::string FormatTable(const Table& table);
absl::Status WriteTable(const Table& table, const std::string& path);

enum class MembershipLabel : uint8_t { kNonMember = 0, kMember = 1 };

inline int LabelValue(MembershipLabel label) {
  return static_cast<int>(label);
}

struct AttackDataset {
  Table table;
  std::vector<MembershipLabel> labels;
  size_t num_members = 0;
  size_t num_non_members = 0;
  // Unseen rows that also occur verbatim among the training rows. These are
  // kept, only counted.
  size_t cross_duplicates = 0;
};

// Training rows labelled member followed by unseen rows labelled non-member.
// With `balance` the larger side is subsampled without replacement (order
// preserved) so both labels have min(|r|, |u|) records.
absl::StatusOr<AttackDataset> BuildAttackDataset(const Table& r,
                                                 const Table& u, bool balance,
                                                 uint64_t seed);

size_t CountCrossDuplicates(const Table& r, const Table& u);

}  // namespace mirisk

#endif  // MIRISK_TABLE_H_
