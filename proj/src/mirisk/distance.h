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

// Gower's distance between mixed-type records and the nearest-neighbour
// distance from every attack record to a synthetic table.
//
// Per feature, the dissimilarity is
//   numeric:      |x - y| / range, clamped to [0, 1]
//   categorical:  0 if equal, 1 otherwise
// and the distance is the mean over features. A numeric feature whose range
// is zero is treated like a categorical one. With range normalisation turned
// off the numeric term is the raw |x - y| and distances are unbounded.
//
// Feature terms are always accumulated left to right in schema order, so a
// pairwise distance has exactly one floating-point value no matter which
// code path computes it.

#ifndef MIRISK_DISTANCE_H_
#define MIRISK_DISTANCE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mirisk/table.h"

namespace mirisk {

// Rows of a table flattened row-major, with categories replaced by integer
// codes (stored as doubles) from a dictionary shared by every table encoded
// through the same GowerContext.
struct EncodedTable {
  size_t num_rows = 0;
  size_t num_features = 0;
  std::vector<double> values;

  std::span<const double> row(size_t i) const {
    return {values.data() + i * num_features, num_features};
  }
};

class GowerContext {
 public:
  enum class Term : uint8_t {
    kMismatch,    // categorical, or numeric with zero range
    kNormalized,  // |x - y| / range, clamped
    kAbsolute,    // |x - y|
  };

  // Ranges are taken from the schema when declared, otherwise from the union
  // of both tables. Category dictionaries cover both tables.
  static absl::StatusOr<GowerContext> Create(const Table& a, const Table& b,
                                             bool range_normalize);

  const Schema& schema() const { return schema_; }
  bool range_normalize() const { return range_normalize_; }
  double range(size_t feature) const { return ranges_[feature]; }
  Term term(size_t feature) const { return terms_[feature]; }
  // Numeric features whose range is zero.
  std::vector<std::string> ConstantFeatures() const;

  absl::StatusOr<EncodedTable> Encode(const Table& table) const;

 private:
  GowerContext() = default;

  Schema schema_;
  bool range_normalize_ = true;
  std::vector<double> ranges_;
  std::vector<Term> terms_;
  std::vector<std::unordered_map<std::string, double>> codes_;
};

double GowerDistance(std::span<const double> x, std::span<const double> y,
                     const GowerContext& ctx);

// Convenience overload on table rows; both tables must match ctx.schema().
absl::StatusOr<double> GowerDistance(const Table& a, size_t row_a,
                                     const Table& b, size_t row_b,
                                     const GowerContext& ctx);

// For each query row, the minimum Gower distance to any reference row.
// The result does not depend on `num_threads` or on the reference row order.
std::vector<double> MinDistances(const EncodedTable& queries,
                                 const EncodedTable& reference,
                                 const GowerContext& ctx, int num_threads);

struct DistanceRecord {
  double distance = 0.0;
  MembershipLabel label = MembershipLabel::kNonMember;
  size_t source_index = 0;
};

struct DistanceTable {
  std::vector<DistanceRecord> records;
  // Positions in `records`. Disjoint; records dropped while balancing are in
  // neither list. Empty until SplitDistances runs.
  std::vector<size_t> train_indices;
  std::vector<size_t> test_indices;
  bool range_normalized = true;

  bool has_split() const { return !test_indices.empty(); }
};

absl::StatusOr<DistanceTable> NearestNeighborDistances(
    const AttackDataset& attack, const Table& synth, const GowerContext& ctx,
    int num_threads);

// Seeded shuffle into train and test. The test set always has equal member
// and non-member counts; with `balanced_train` the training set does too.
absl::StatusOr<DistanceTable> SplitDistances(const DistanceTable& table,
                                             double train_fraction,
                                             bool balanced_train,
                                             uint64_t seed);

// CSV with header `source_index,distance,label`.
std::string FormatDistanceTable(const DistanceTable& table);
absl::Status WriteDistanceTable(const DistanceTable& table,
                                const std::string& path);
absl::StatusOr<DistanceTable> LoadDistanceTable(const std::string& path);
absl::StatusOr<DistanceTable> ParseDistanceTable(
    const std::vector<std::string>& lines);

}  // namespace mirisk

#endif  // MIRISK_DISTANCE_H_
