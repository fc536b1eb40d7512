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

#include "mirisk/attacks.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mirisk/parallel.h"
#include "mirisk/status_macros.h"

namespace mirisk {
namespace {

std::vector<double> SplitDistances(const DistanceTable& table,
                                   const std::vector<size_t>& indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (size_t i : indices) out.push_back(table.records[i].distance);
  return out;
}

size_t MinSamplesToFit(const BandwidthSpec& bandwidth) {
  return bandwidth.is_scott() ? 2 : 1;
}

}  // namespace

absl::string_view AttackName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kTrueDistribution:
      return "true_distribution";
    case AttackKind::kRealistic:
      return "realistic";
    case AttackKind::kMethod1:
      return "method1";
  }
  return "unknown";
}

Posterior PosteriorFromDensities(double member_density,
                                 double non_member_density,
                                 double prior_member) {
  const long double a = static_cast<long double>(prior_member) *
                        static_cast<long double>(member_density);
  const long double b = (1.0L - static_cast<long double>(prior_member)) *
                        static_cast<long double>(non_member_density);
  const long double total = a + b;
  if (!(total > 0.0L)) return Posterior{0.5, 0.5, true};
  Posterior p;
  if (a <= b) {
    p.member = static_cast<double>(a / total);
    p.non_member = 1.0 - p.member;
  } else {
    p.non_member = static_cast<double>(b / total);
    p.member = 1.0 - p.non_member;
  }
  return p;
}

absl::Status ValidateAttackOptions(const AttackOptions& options) {
  if (!(options.decision_threshold > 0.0 && options.decision_threshold < 1.0)) {
    return absl::InvalidArgumentError(
        "decision threshold must lie strictly between 0 and 1");
  }
  if (!(options.prior_member > 0.0 && options.prior_member < 1.0)) {
    return absl::InvalidArgumentError(
        "member prior must lie strictly between 0 and 1");
  }
  return absl::OkStatus();
}

double Percentile(std::span<const double> sorted, double p) {
  if (sorted.size() == 1) return sorted[0];
  const double position = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(position));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double fraction = position - static_cast<double>(lo);
  return sorted[lo] + fraction * (sorted[lo + 1] - sorted[lo]);
}

absl::StatusOr<ThresholdGrid> ResolveThresholds(
    const DistanceTable& table, std::vector<double> percentiles) {
  if (percentiles.empty()) {
    return absl::InvalidArgumentError("no percentiles given");
  }
  std::sort(percentiles.begin(), percentiles.end());
  for (size_t i = 0; i < percentiles.size(); ++i) {
    if (!(percentiles[i] > 0.0 && percentiles[i] < 100.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "percentile ", percentiles[i], " is outside (0, 100)"));
    }
    if (i > 0 && percentiles[i] == percentiles[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("percentile ", percentiles[i], " listed twice"));
    }
  }
  std::vector<double> distances;
  if (table.has_split()) {
    distances = SplitDistances(table, table.train_indices);
    const std::vector<double> test = SplitDistances(table, table.test_indices);
    distances.insert(distances.end(), test.begin(), test.end());
  } else {
    for (const DistanceRecord& r : table.records) {
      distances.push_back(r.distance);
    }
  }
  if (distances.empty()) {
    return absl::InvalidArgumentError("distance table is empty");
  }
  std::sort(distances.begin(), distances.end());
  ThresholdGrid grid;
  grid.percentiles = std::move(percentiles);
  for (double p : grid.percentiles) {
    grid.thresholds.push_back(Percentile(distances, p));
  }
  return grid;
}

std::vector<AttackOutcome> ScoreTestSplit(const PosteriorModel& model,
                                          const DistanceTable& table,
                                          double decision_threshold,
                                          int num_threads) {
  std::vector<AttackOutcome> outcomes(table.test_indices.size());
  ParallelFor(outcomes.size(), num_threads, [&](size_t k) {
    const DistanceRecord& record = table.records[table.test_indices[k]];
    const Posterior p = model.Evaluate(record.distance);
    AttackOutcome& out = outcomes[k];
    out.source_index = record.source_index;
    out.distance = record.distance;
    out.posterior = p.member;
    out.predicted = p.member >= decision_threshold
                        ? MembershipLabel::kMember
                        : MembershipLabel::kNonMember;
    out.truth = record.label;
    out.underflow = p.underflow;
  });
  return outcomes;
}

absl::StatusOr<TrueDistributionResult> TrueDistributionAttack(
    const DistanceTable& table, const AttackOptions& options) {
  MIRISK_RETURN_IF_ERROR(ValidateAttackOptions(options));
  if (!table.has_split()) {
    return absl::FailedPreconditionError("distance table has no test split");
  }
  std::vector<double> members;
  std::vector<double> non_members;
  for (size_t i : table.train_indices) {
    const DistanceRecord& r = table.records[i];
    (r.label == MembershipLabel::kMember ? members : non_members)
        .push_back(r.distance);
  }
  if (members.empty() || non_members.empty()) {
    return absl::FailedPreconditionError(
        "training split must contain members and non-members");
  }
  absl::StatusOr<KdeModel> member_kde =
      KdeModel::Fit(std::move(members), options.bandwidth);
  if (!member_kde.ok()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "member density: ", member_kde.status().message()));
  }
  absl::StatusOr<KdeModel> non_member_kde =
      KdeModel::Fit(std::move(non_members), options.bandwidth);
  if (!non_member_kde.ok()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "non-member density: ", non_member_kde.status().message()));
  }
  PosteriorModel model(*std::move(member_kde), *std::move(non_member_kde),
                       options.prior_member);
  std::vector<AttackOutcome> outcomes = ScoreTestSplit(
      model, table, options.decision_threshold, options.num_threads);
  return TrueDistributionResult{std::move(model), std::move(outcomes)};
}

double MaxPosteriorIncrease(const PosteriorModel& model, double lo, double hi,
                            size_t points) {
  if (points < 2) return 0.0;
  double largest = 0.0;
  double previous = model.Evaluate(lo).member;
  for (size_t i = 1; i < points; ++i) {
    const double x =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double current = model.Evaluate(x).member;
    largest = std::max(largest, current - previous);
    previous = current;
  }
  return largest;
}

absl::StatusOr<std::vector<RealisticThresholdResult>> RealisticAttack(
    const DistanceTable& table, const ThresholdGrid& grid,
    const AttackOptions& options) {
  MIRISK_RETURN_IF_ERROR(ValidateAttackOptions(options));
  if (!table.has_split()) {
    return absl::FailedPreconditionError("distance table has no test split");
  }
  if (grid.percentiles.size() != grid.thresholds.size() ||
      grid.thresholds.empty()) {
    return absl::InvalidArgumentError("malformed threshold grid");
  }
  double grid_hi = 1.0;
  if (!table.range_normalized) {
    grid_hi = 0.0;
    for (const DistanceRecord& r : table.records) {
      grid_hi = std::max(grid_hi, r.distance);
    }
  }
  const std::vector<double> train = SplitDistances(table, table.train_indices);
  const size_t min_samples = MinSamplesToFit(options.bandwidth);

  std::vector<RealisticThresholdResult> results(grid.thresholds.size());
  // Thresholds run one after another; scoring within each is parallel.
  for (size_t k = 0; k < results.size(); ++k) {
    RealisticThresholdResult& result = results[k];
    result.percentile = grid.percentiles[k];
    result.threshold = grid.thresholds[k];
    std::vector<double> supposed_members;
    std::vector<double> supposed_non_members;
    for (double d : train) {
      (d < result.threshold ? supposed_members : supposed_non_members)
          .push_back(d);
    }
    result.supposed_members = supposed_members.size();
    result.supposed_non_members = supposed_non_members.size();
    if (supposed_members.size() < min_samples ||
        supposed_non_members.size() < min_samples) {
      result.skip_reason = absl::StrCat(
          "supposed members: ", supposed_members.size(),
          ", supposed non-members: ", supposed_non_members.size(),
          "; need at least ", min_samples, " of each to fit a density");
      continue;
    }
    absl::StatusOr<KdeModel> member_kde =
        KdeModel::Fit(std::move(supposed_members), options.bandwidth);
    absl::StatusOr<KdeModel> non_member_kde =
        KdeModel::Fit(std::move(supposed_non_members), options.bandwidth);
    if (!member_kde.ok() || !non_member_kde.ok()) {
      result.skip_reason = std::string(
          (!member_kde.ok() ? member_kde.status() : non_member_kde.status())
              .message());
      continue;
    }
    result.model.emplace(*std::move(member_kde), *std::move(non_member_kde),
                         options.prior_member);
    result.outcomes = ScoreTestSplit(*result.model, table,
                                     options.decision_threshold,
                                     options.num_threads);
    result.max_posterior_increase =
        MaxPosteriorIncrease(*result.model, 0.0, grid_hi);
  }
  const bool any_fitted =
      std::any_of(results.begin(), results.end(),
                  [](const RealisticThresholdResult& r) { return r.model; });
  if (!any_fitted) {
    return absl::FailedPreconditionError(
        "realistic attack: every threshold left a supposed class too small "
        "to fit");
  }
  return results;
}

absl::StatusOr<std::vector<Method1ThresholdResult>> Method1Attack(
    const DistanceTable& table, const ThresholdGrid& grid) {
  if (table.test_indices.empty()) {
    return absl::FailedPreconditionError("distance table has no test split");
  }
  if (grid.percentiles.size() != grid.thresholds.size()) {
    return absl::InvalidArgumentError("malformed threshold grid");
  }
  std::vector<Method1ThresholdResult> results;
  results.reserve(grid.thresholds.size());
  for (size_t k = 0; k < grid.thresholds.size(); ++k) {
    Method1ThresholdResult result;
    result.percentile = grid.percentiles[k];
    result.threshold = grid.thresholds[k];
    result.outcomes.reserve(table.test_indices.size());
    for (size_t i : table.test_indices) {
      const DistanceRecord& record = table.records[i];
      AttackOutcome out;
      out.source_index = record.source_index;
      out.distance = record.distance;
      const bool member = record.distance < result.threshold;
      out.predicted =
          member ? MembershipLabel::kMember : MembershipLabel::kNonMember;
      out.posterior = member ? 1.0 : 0.0;
      out.truth = record.label;
      result.outcomes.push_back(out);
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace mirisk
