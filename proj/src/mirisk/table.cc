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

#include "mirisk/table.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "mirisk/csv.h"
#include "mirisk/random.h"
#include "mirisk/status_macros.h"

namespace mirisk {

const char* FeatureKindName(FeatureKind kind) {
  return kind == FeatureKind::kNumeric ? "numeric" : "categorical";
}

absl::Status ValidateSchema(const Schema& schema) {
  if (schema.empty()) return absl::InvalidArgumentError("schema is empty");
  std::unordered_set<std::string> names;
  for (const FeatureSpec& spec : schema) {
    if (spec.name.empty()) {
      return absl::InvalidArgumentError("feature with empty name");
    }
    if (!names.insert(spec.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate feature name '", spec.name, "'"));
    }
    if (spec.range.has_value()) {
      if (spec.kind != FeatureKind::kNumeric) {
        return absl::InvalidArgumentError(absl::StrCat(
            "categorical feature '", spec.name, "' cannot have a range"));
      }
      if (!std::isfinite(spec.range->min) || !std::isfinite(spec.range->max) ||
          spec.range->min > spec.range->max) {
        return absl::InvalidArgumentError(absl::StrCat(
            "feature '", spec.name, "': range requires finite min <= max"));
      }
    }
  }
  return absl::OkStatus();
}

bool SameLayout(const Schema& a, const Schema& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].kind != b[i].kind) return false;
  }
  return true;
}

absl::StatusOr<Schema> ParseSchema(const std::vector<std::string>& lines) {
  Schema schema;
  for (size_t i = 0; i < lines.size(); ++i) {
    absl::string_view line = lines[i];
    if (const size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const auto where = [&] { return absl::StrCat("schema line ", i + 1, ": "); };
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat(where(), "expected 'name = kind'"));
    }
    FeatureSpec spec;
    spec.name = std::string(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::vector<std::string> tokens =
        absl::StrSplit(line.substr(eq + 1), absl::ByAnyChar(" \t,"),
                       absl::SkipEmpty());
    if (tokens.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(where(), "missing kind"));
    }
    const std::string kind = absl::AsciiStrToLower(tokens[0]);
    if (kind == "numeric") {
      spec.kind = FeatureKind::kNumeric;
    } else if (kind == "categorical") {
      spec.kind = FeatureKind::kCategorical;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat(where(), "unknown kind '", tokens[0], "'"));
    }
    if (tokens.size() == 3 && spec.kind == FeatureKind::kNumeric) {
      const std::optional<double> lo = csv::ParseFiniteDouble(tokens[1]);
      const std::optional<double> hi = csv::ParseFiniteDouble(tokens[2]);
      if (!lo || !hi) {
        return absl::InvalidArgumentError(
            absl::StrCat(where(), "range bounds must be finite numbers"));
      }
      spec.range = NumericRange{*lo, *hi};
      spec.range_declared = true;
    } else if (tokens.size() != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat(where(), "expected 'numeric [min max]' or 'categorical'"));
    }
    schema.push_back(std::move(spec));
  }
  MIRISK_RETURN_IF_ERROR(ValidateSchema(schema));
  return schema;
}

absl::StatusOr<Schema> LoadSchema(const std::string& path) {
  MIRISK_ASSIGN_OR_RETURN(std::vector<std::string> lines, csv::ReadLines(path));
  absl::StatusOr<Schema> schema = ParseSchema(lines);
  if (!schema.ok()) {
    return absl::Status(schema.status().code(),
                        absl::StrCat(path, ": ", schema.status().message()));
  }
  return schema;
}

absl::StatusOr<Table> Table::FromRows(
    Schema schema, const std::vector<std::vector<Cell>>& rows) {
  MIRISK_RETURN_IF_ERROR(ValidateSchema(schema));
  Table table;
  table.num_rows_ = rows.size();
  table.numeric_.resize(schema.size());
  table.categorical_.resize(schema.size());
  for (size_t f = 0; f < schema.size(); ++f) {
    if (schema[f].kind == FeatureKind::kNumeric) {
      table.numeric_[f].reserve(rows.size());
    } else {
      table.categorical_[f].reserve(rows.size());
    }
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r + 1, " has ", rows[r].size(),
                       " values, expected ", schema.size()));
    }
    for (size_t f = 0; f < schema.size(); ++f) {
      const Cell& cell = rows[r][f];
      if (schema[f].kind == FeatureKind::kNumeric) {
        const double* value = std::get_if<double>(&cell);
        if (value == nullptr || !std::isfinite(*value)) {
          return absl::InvalidArgumentError(
              absl::StrCat("row ", r + 1, ": feature '", schema[f].name,
                           "' needs a finite number"));
        }
        table.numeric_[f].push_back(*value);
      } else {
        const std::string* token = std::get_if<std::string>(&cell);
        if (token == nullptr) {
          return absl::InvalidArgumentError(
              absl::StrCat("row ", r + 1, ": feature '", schema[f].name,
                           "' needs a category token"));
        }
        table.categorical_[f].push_back(*token);
      }
    }
  }
  table.schema_ = std::move(schema);
  table.RefreshObservedRanges();
  return table;
}

void Table::RefreshObservedRanges() {
  for (size_t f = 0; f < schema_.size(); ++f) {
    FeatureSpec& spec = schema_[f];
    if (spec.kind != FeatureKind::kNumeric || spec.range_declared) continue;
    const std::vector<double>& column = numeric_[f];
    if (column.empty()) {
      spec.range.reset();
      continue;
    }
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    spec.range = NumericRange{*lo, *hi};
  }
}

absl::StatusOr<Table> Table::Concat(const Table& a, const Table& b) {
  if (!SameLayout(a.schema_, b.schema_)) {
    return absl::InvalidArgumentError("tables have different schemas");
  }
  Table out = a;
  out.num_rows_ = a.num_rows_ + b.num_rows_;
  for (size_t f = 0; f < out.schema_.size(); ++f) {
    auto& num = out.numeric_[f];
    num.insert(num.end(), b.numeric_[f].begin(), b.numeric_[f].end());
    auto& cat = out.categorical_[f];
    cat.insert(cat.end(), b.categorical_[f].begin(), b.categorical_[f].end());
  }
  out.RefreshObservedRanges();
  return out;
}

Cell Table::cell(size_t row, size_t feature) const {
  if (schema_[feature].kind == FeatureKind::kNumeric) {
    return numeric_[feature][row];
  }
  return categorical_[feature][row];
}

Table Table::Select(const std::vector<size_t>& rows) const {
  Table out;
  out.schema_ = schema_;
  out.num_rows_ = rows.size();
  out.numeric_.resize(schema_.size());
  out.categorical_.resize(schema_.size());
  for (size_t f = 0; f < schema_.size(); ++f) {
    if (schema_[f].kind == FeatureKind::kNumeric) {
      out.numeric_[f].reserve(rows.size());
      for (size_t r : rows) out.numeric_[f].push_back(numeric_[f][r]);
    } else {
      out.categorical_[f].reserve(rows.size());
      for (size_t r : rows) out.categorical_[f].push_back(categorical_[f][r]);
    }
  }
  out.RefreshObservedRanges();
  return out;
}

std::string Table::RowKey(size_t row) const {
  std::string key;
  for (size_t f = 0; f < schema_.size(); ++f) {
    if (schema_[f].kind == FeatureKind::kNumeric) {
      // +0 and -0 compare equal, so they must share a key.
      const double v = numeric_[f][row] == 0.0 ? 0.0 : numeric_[f][row];
      absl::StrAppend(&key, "n", csv::FormatDouble(v), "\x1f");
    } else {
      absl::StrAppend(&key, "c", categorical_[f][row].size(), ":",
                      categorical_[f][row], "\x1f");
    }
  }
  return key;
}

absl::StatusOr<Table> ParseTable(const std::vector<std::string>& lines,
                                 const std::optional<Schema>& schema) {
  if (lines.empty()) return absl::InvalidArgumentError("missing header row");
  MIRISK_ASSIGN_OR_RETURN(std::vector<std::string> header,
                          csv::SplitLine(lines[0]));
  {
    std::unordered_set<std::string> seen;
    for (const std::string& name : header) {
      if (name.empty()) {
        return absl::InvalidArgumentError("header has an empty column name");
      }
      if (!seen.insert(name).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("duplicate column '", name, "' in header"));
      }
    }
  }

  std::vector<std::vector<std::string>> raw;
  raw.reserve(lines.size() - 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    absl::StatusOr<std::vector<std::string>> fields = csv::SplitLine(lines[i]);
    if (!fields.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", i, " (line ", i + 1, "): ", fields.status().message()));
    }
    if (fields->size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " (line ", i + 1, "): ", fields->size(),
                       " values, expected ", header.size()));
    }
    for (size_t f = 0; f < fields->size(); ++f) {
      if ((*fields)[f].empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", i, " (line ", i + 1, "): column '", header[f],
                         "' is empty; missing values are not supported"));
      }
    }
    raw.push_back(*std::move(fields));
  }
  if (raw.empty()) return absl::InvalidArgumentError("empty table");

  Schema resolved;
  if (schema.has_value()) {
    std::unordered_map<std::string, const FeatureSpec*> by_name;
    for (const FeatureSpec& spec : *schema) by_name[spec.name] = &spec;
    for (const std::string& name : header) {
      auto it = by_name.find(name);
      if (it == by_name.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("column '", name, "' is not in the schema"));
      }
      resolved.push_back(*it->second);
    }
    if (resolved.size() != schema->size()) {
      return absl::InvalidArgumentError(
          "schema lists features that are missing from the header");
    }
  } else {
    for (size_t f = 0; f < header.size(); ++f) {
      const bool all_numeric = std::all_of(
          raw.begin(), raw.end(), [f](const std::vector<std::string>& row) {
            return csv::ParseFiniteDouble(row[f]).has_value();
          });
      resolved.push_back(FeatureSpec{
          header[f],
          all_numeric ? FeatureKind::kNumeric : FeatureKind::kCategorical,
          std::nullopt, false});
    }
  }

  std::vector<std::vector<Cell>> rows(raw.size());
  for (size_t r = 0; r < raw.size(); ++r) {
    rows[r].reserve(header.size());
    for (size_t f = 0; f < header.size(); ++f) {
      if (resolved[f].kind == FeatureKind::kNumeric) {
        const std::optional<double> value = csv::ParseFiniteDouble(raw[r][f]);
        if (!value) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r + 1, " (line ", r + 2, "): column '", header[f],
              "': '", raw[r][f], "' is not a finite number"));
        }
        rows[r].emplace_back(*value);
      } else {
        rows[r].emplace_back(std::move(raw[r][f]));
      }
    }
  }
  return Table::FromRows(std::move(resolved), rows);
}

absl::StatusOr<Table> LoadTable(const std::string& path,
                                const std::optional<Schema>& schema) {
  MIRISK_ASSIGN_OR_RETURN(std::vector<std::string> lines, csv::ReadLines(path));
  absl::StatusOr<Table> table = ParseTable(lines, schema);
  if (!table.ok()) {
    return absl::Status(table.status().code(),
                        absl::StrCat(path, ": ", table.status().message()));
  }
  return table;
}

std::string FormatTable(const Table& table) {
  std::string out;
  std::vector<std::string> fields;
  for (const FeatureSpec& spec : table.schema()) {
    fields.push_back(csv::EscapeField(spec.name));
  }
  absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  for (size_t r = 0; r < table.num_rows(); ++r) {
    fields.clear();
    for (size_t f = 0; f < table.num_features(); ++f) {
      if (table.schema()[f].kind == FeatureKind::kNumeric) {
        fields.push_back(csv::FormatDouble(table.numeric(r, f)));
      } else {
        fields.push_back(csv::EscapeField(table.category(r, f)));
      }
    }
    absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  }
  return out;
}

absl::Status WriteTable(const Table& table, const std::string& path) {
  return csv::WriteFile(path, FormatTable(table));
}

size_t CountCrossDuplicates(const Table& r, const Table& u) {
  std::unordered_set<std::string> keys;
  keys.reserve(r.num_rows());
  for (size_t i = 0; i < r.num_rows(); ++i) keys.insert(r.RowKey(i));
  size_t count = 0;
  for (size_t i = 0; i < u.num_rows(); ++i) {
    if (keys.count(u.RowKey(i)) > 0) ++count;
  }
  return count;
}

absl::StatusOr<AttackDataset> BuildAttackDataset(const Table& r,
                                                 const Table& u, bool balance,
                                                 uint64_t seed) {
  if (!SameLayout(r.schema(), u.schema())) {
    return absl::InvalidArgumentError(
        "training and unseen tables have different schemas");
  }
  if (r.num_rows() == 0 || u.num_rows() == 0) {
    return absl::InvalidArgumentError(
        "training and unseen tables must both be non-empty");
  }
  std::vector<size_t> r_rows(r.num_rows());
  std::vector<size_t> u_rows(u.num_rows());
  for (size_t i = 0; i < r_rows.size(); ++i) r_rows[i] = i;
  for (size_t i = 0; i < u_rows.size(); ++i) u_rows[i] = i;
  if (balance && r.num_rows() != u.num_rows()) {
    Rng rng(seed);
    const size_t keep = std::min(r.num_rows(), u.num_rows());
    if (r.num_rows() > keep) {
      r_rows = rng.SampleSorted(r.num_rows(), keep);
    } else {
      u_rows = rng.SampleSorted(u.num_rows(), keep);
    }
  }
  const Table members = r_rows.size() == r.num_rows() ? r : r.Select(r_rows);
  const Table non_members =
      u_rows.size() == u.num_rows() ? u : u.Select(u_rows);
  MIRISK_ASSIGN_OR_RETURN(Table joined, Table::Concat(members, non_members));

  AttackDataset dataset{std::move(joined), {}, members.num_rows(),
                        non_members.num_rows(), 0};
  dataset.labels.assign(members.num_rows(), MembershipLabel::kMember);
  dataset.labels.insert(dataset.labels.end(), non_members.num_rows(),
                        MembershipLabel::kNonMember);
  dataset.cross_duplicates = CountCrossDuplicates(members, non_members);
  return dataset;
}

}  // namespace mirisk
