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

#include "mirisk/distance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mirisk/csv.h"
#include "mirisk/parallel.h"
#include "mirisk/random.h"
#include "mirisk/status_macros.h"

namespace mirisk {
namespace {

constexpr size_t kQueryBlock = 64;
constexpr size_t kReferenceBlock = 256;

inline double FeatureTerm(GowerContext::Term term, double x, double y,
                          double range) {
  switch (term) {
    case GowerContext::Term::kMismatch:
      return x != y ? 1.0 : 0.0;
    case GowerContext::Term::kNormalized:
      return std::min(std::fabs(x - y) / range, 1.0);
    case GowerContext::Term::kAbsolute:
      return std::fabs(x - y);
  }
  return 0.0;
}

// Scans query rows [begin, end) against every reference row. Partial sums
// only grow, so a pair is abandoned as soon as it reaches the best sum found
// so far; completed sums are identical to the unpruned ones.
void ScanRange(const EncodedTable& queries, const EncodedTable& reference,
               const std::vector<GowerContext::Term>& terms,
               const std::vector<double>& ranges, size_t begin, size_t end,
               std::vector<double>& out) {
  const size_t nf = terms.size();
  const double inf = std::numeric_limits<double>::infinity();
  double best[kQueryBlock];
  for (size_t qb = begin; qb < end; qb += kQueryBlock) {
    const size_t qe = std::min(end, qb + kQueryBlock);
    std::fill(best, best + (qe - qb), inf);
    for (size_t rb = 0; rb < reference.num_rows; rb += kReferenceBlock) {
      const size_t re = std::min(reference.num_rows, rb + kReferenceBlock);
      for (size_t q = qb; q < qe; ++q) {
        double& best_sum = best[q - qb];
        if (best_sum == 0.0) continue;
        const double* x = queries.values.data() + q * nf;
        for (size_t r = rb; r < re; ++r) {
          const double* y = reference.values.data() + r * nf;
          double sum = 0.0;
          size_t f = 0;
          for (; f < nf; ++f) {
            sum += FeatureTerm(terms[f], x[f], y[f], ranges[f]);
            if (sum >= best_sum) break;
          }
          if (f == nf && sum < best_sum) {
            best_sum = sum;
            if (best_sum == 0.0) break;
          }
        }
      }
    }
    for (size_t q = qb; q < qe; ++q) {
      out[q] = best[q - qb] / static_cast<double>(nf);
    }
  }
}

}  // namespace

absl::StatusOr<GowerContext> GowerContext::Create(const Table& a,
                                                  const Table& b,
                                                  bool range_normalize) {
  if (!SameLayout(a.schema(), b.schema())) {
    return absl::InvalidArgumentError(
        "attack and synthetic tables have different schemas");
  }
  GowerContext ctx;
  ctx.schema_ = a.schema();
  ctx.range_normalize_ = range_normalize;
  const size_t nf = ctx.schema_.size();
  ctx.ranges_.assign(nf, 0.0);
  ctx.terms_.assign(nf, Term::kMismatch);
  ctx.codes_.resize(nf);
  for (size_t f = 0; f < nf; ++f) {
    FeatureSpec& spec = ctx.schema_[f];
    if (spec.kind == FeatureKind::kCategorical) {
      auto& codes = ctx.codes_[f];
      for (const Table* t : {&a, &b}) {
        for (size_t r = 0; r < t->num_rows(); ++r) {
          codes.emplace(t->category(r, f), static_cast<double>(codes.size()));
        }
      }
      continue;
    }
    NumericRange range;
    if (spec.range_declared && spec.range.has_value()) {
      range = *spec.range;
    } else {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const Table* t : {&a, &b}) {
        for (size_t r = 0; r < t->num_rows(); ++r) {
          lo = std::min(lo, t->numeric(r, f));
          hi = std::max(hi, t->numeric(r, f));
        }
      }
      if (lo > hi) lo = hi = 0.0;
      range = NumericRange{lo, hi};
      spec.range = range;
    }
    ctx.ranges_[f] = range.width();
    if (!range_normalize) {
      ctx.terms_[f] = Term::kAbsolute;
    } else if (range.width() > 0.0) {
      ctx.terms_[f] = Term::kNormalized;
    } else {
      ctx.terms_[f] = Term::kMismatch;
    }
  }
  return ctx;
}

std::vector<std::string> GowerContext::ConstantFeatures() const {
  std::vector<std::string> names;
  for (size_t f = 0; f < schema_.size(); ++f) {
    if (schema_[f].kind == FeatureKind::kNumeric && ranges_[f] == 0.0) {
      names.push_back(schema_[f].name);
    }
  }
  return names;
}

absl::StatusOr<EncodedTable> GowerContext::Encode(const Table& table) const {
  if (!SameLayout(table.schema(), schema_)) {
    return absl::InvalidArgumentError("table does not match distance schema");
  }
  EncodedTable out;
  out.num_rows = table.num_rows();
  out.num_features = schema_.size();
  out.values.resize(out.num_rows * out.num_features);
  for (size_t f = 0; f < out.num_features; ++f) {
    const bool numeric = schema_[f].kind == FeatureKind::kNumeric;
    for (size_t r = 0; r < out.num_rows; ++r) {
      double value;
      if (numeric) {
        value = table.numeric(r, f);
      } else {
        auto it = codes_[f].find(table.category(r, f));
        if (it == codes_[f].end()) {
          return absl::InvalidArgumentError(
              absl::StrCat("category '", table.category(r, f),
                           "' of feature '", schema_[f].name,
                           "' is unknown to this distance context"));
        }
        value = it->second;
      }
      out.values[r * out.num_features + f] = value;
    }
  }
  return out;
}

double GowerDistance(std::span<const double> x, std::span<const double> y,
                     const GowerContext& ctx) {
  const size_t nf = ctx.schema().size();
  double sum = 0.0;
  for (size_t f = 0; f < nf; ++f) {
    sum += FeatureTerm(ctx.term(f), x[f], y[f], ctx.range(f));
  }
  return sum / static_cast<double>(nf);
}

absl::StatusOr<double> GowerDistance(const Table& a, size_t row_a,
                                     const Table& b, size_t row_b,
                                     const GowerContext& ctx) {
  if (row_a >= a.num_rows() || row_b >= b.num_rows()) {
    return absl::OutOfRangeError("row index out of range");
  }
  MIRISK_ASSIGN_OR_RETURN(EncodedTable ea, ctx.Encode(a.Select({row_a})));
  MIRISK_ASSIGN_OR_RETURN(EncodedTable eb, ctx.Encode(b.Select({row_b})));
  return GowerDistance(ea.row(0), eb.row(0), ctx);
}

std::vector<double> MinDistances(const EncodedTable& queries,
                                 const EncodedTable& reference,
                                 const GowerContext& ctx, int num_threads) {
  std::vector<double> out(queries.num_rows,
                          std::numeric_limits<double>::infinity());
  if (queries.num_rows == 0 || reference.num_rows == 0) return out;
  const size_t nf = ctx.schema().size();
  std::vector<GowerContext::Term> terms(nf);
  std::vector<double> ranges(nf);
  for (size_t f = 0; f < nf; ++f) {
    terms[f] = ctx.term(f);
    ranges[f] = ctx.range(f);
  }

  const size_t blocks = (queries.num_rows + kQueryBlock - 1) / kQueryBlock;
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(ResolveThreadCount(num_threads)), blocks);
  if (workers <= 1) {
    ScanRange(queries, reference, terms, ranges, 0, queries.num_rows, out);
    return out;
  }
  // Contiguous block ranges per worker; each writes a disjoint slice of out.
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    const size_t begin = std::min(queries.num_rows,
                                  (blocks * w / workers) * kQueryBlock);
    const size_t end = std::min(queries.num_rows,
                                (blocks * (w + 1) / workers) * kQueryBlock);
    pool.emplace_back([&, begin, end] {
      ScanRange(queries, reference, terms, ranges, begin, end, out);
    });
  }
  for (std::thread& t : pool) t.join();
  return out;
}

absl::StatusOr<DistanceTable> NearestNeighborDistances(
    const AttackDataset& attack, const Table& synth, const GowerContext& ctx,
    int num_threads) {
  if (synth.num_rows() == 0) {
    return absl::InvalidArgumentError("synthetic table is empty");
  }
  MIRISK_ASSIGN_OR_RETURN(EncodedTable queries, ctx.Encode(attack.table));
  MIRISK_ASSIGN_OR_RETURN(EncodedTable reference, ctx.Encode(synth));
  const std::vector<double> distances =
      MinDistances(queries, reference, ctx, num_threads);
  DistanceTable table;
  table.range_normalized = ctx.range_normalize();
  table.records.reserve(distances.size());
  for (size_t i = 0; i < distances.size(); ++i) {
    table.records.push_back(DistanceRecord{distances[i], attack.labels[i], i});
  }
  return table;
}

absl::StatusOr<DistanceTable> SplitDistances(const DistanceTable& table,
                                             double train_fraction,
                                             bool balanced_train,
                                             uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        "train fraction must lie strictly between 0 and 1");
  }
  const size_t n = table.records.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(std::span<size_t>(order));

  std::vector<size_t> members;
  std::vector<size_t> non_members;
  for (size_t i : order) {
    (table.records[i].label == MembershipLabel::kMember ? members
                                                        : non_members)
        .push_back(i);
  }
  if (members.size() < 2 || non_members.size() < 2) {
    return absl::FailedPreconditionError(absl::StrCat(
        "splitting needs at least 2 records of each label, got ",
        members.size(), " members and ", non_members.size(), " non-members"));
  }

  const size_t train_target = static_cast<size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  const size_t smaller = std::min(members.size(), non_members.size());
  // Keep at least one record of each label for training.
  const size_t per_label_test =
      std::clamp<size_t>((n - std::min(n, train_target)) / 2, 1, smaller - 1);

  std::vector<char> role(n, 0);  // 0 unused, 1 train, 2 test
  for (size_t k = 0; k < per_label_test; ++k) {
    role[members[k]] = 2;
    role[non_members[k]] = 2;
  }
  size_t train_members = members.size() - per_label_test;
  size_t train_non_members = non_members.size() - per_label_test;
  if (balanced_train) {
    train_members = train_non_members =
        std::min(train_members, train_non_members);
  }
  for (size_t k = 0; k < train_members; ++k) {
    role[members[per_label_test + k]] = 1;
  }
  for (size_t k = 0; k < train_non_members; ++k) {
    role[non_members[per_label_test + k]] = 1;
  }

  DistanceTable out;
  out.records = table.records;
  out.range_normalized = table.range_normalized;
  for (size_t i : order) {
    if (role[i] == 1) out.train_indices.push_back(i);
    if (role[i] == 2) out.test_indices.push_back(i);
  }
  return out;
}

std::string FormatDistanceTable(const DistanceTable& table) {
  std::string out = "source_index,distance,label\n";
  for (const DistanceRecord& record : table.records) {
    absl::StrAppend(&out, record.source_index, ",",
                    csv::FormatDouble(record.distance), ",",
                    LabelValue(record.label), "\n");
  }
  return out;
}

absl::Status WriteDistanceTable(const DistanceTable& table,
                                const std::string& path) {
  return csv::WriteFile(path, FormatDistanceTable(table));
}

absl::StatusOr<DistanceTable> ParseDistanceTable(
    const std::vector<std::string>& lines) {
  if (lines.empty()) return absl::InvalidArgumentError("missing header row");
  MIRISK_ASSIGN_OR_RETURN(std::vector<std::string> header,
                          csv::SplitLine(lines[0]));
  if (header != std::vector<std::string>{"source_index", "distance", "label"}) {
    return absl::InvalidArgumentError(
        "distance table header must be 'source_index,distance,label'");
  }
  DistanceTable table;
  for (size_t i = 1; i < lines.size(); ++i) {
    MIRISK_ASSIGN_OR_RETURN(std::vector<std::string> fields,
                            csv::SplitLine(lines[i]));
    const auto bad = [&](absl::string_view what) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " (line ", i + 1, "): ", what));
    };
    if (fields.size() != 3) return bad("expected 3 values");
    const std::optional<double> index = csv::ParseFiniteDouble(fields[0]);
    const std::optional<double> distance = csv::ParseFiniteDouble(fields[1]);
    if (!index || *index < 0 || std::floor(*index) != *index) {
      return bad("source_index must be a nonnegative integer");
    }
    if (!distance || *distance < 0.0) {
      return bad("distance must be a finite nonnegative number");
    }
    MembershipLabel label;
    if (fields[2] == "1") {
      label = MembershipLabel::kMember;
    } else if (fields[2] == "0") {
      label = MembershipLabel::kNonMember;
    } else {
      return bad("label must be 0 or 1");
    }
    table.records.push_back(
        DistanceRecord{*distance, label, static_cast<size_t>(*index)});
  }
  if (table.records.empty()) {
    return absl::InvalidArgumentError("empty distance table");
  }
  return table;
}

absl::StatusOr<DistanceTable> LoadDistanceTable(const std::string& path) {
  MIRISK_ASSIGN_OR_RETURN(std::vector<std::string> lines, csv::ReadLines(path));
  absl::StatusOr<DistanceTable> table = ParseDistanceTable(lines);
  if (!table.ok()) {
    return absl::Status(table.status().code(),
                        absl::StrCat(path, ": ", table.status().message()));
  }
  return table;
}

}  // namespace mirisk
