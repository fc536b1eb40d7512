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

// Membership inference attacks on nearest-neighbour distances.
//
// All probabilistic attacks score a distance d with the Bayes posterior
//
//   P(member | d) = pi f_m(d) / (pi f_m(d) + (1 - pi) f_n(d))
//
// where f_m and f_n are kernel density estimates of the member and
// non-member distance distributions and pi is the member prior. The attacks
// differ only in which labels are used to fit f_m and f_n:
//
//  * true distribution: the real membership labels of the training split.
//  * realistic: pseudo-labels from a distance threshold tau, d < tau being a
//    "supposed member". True labels are only used for evaluation.
//  * method 1: no densities at all; d < tau is predicted member.

#ifndef MIRISK_ATTACKS_H_
#define MIRISK_ATTACKS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "mirisk/distance.h"
#include "mirisk/kde.h"
#include "mirisk/table.h"

namespace mirisk {

enum class AttackKind { kTrueDistribution, kRealistic, kMethod1 };

absl::string_view AttackName(AttackKind kind);

struct Posterior {
  double member = 0.5;
  double non_member = 0.5;
  // Both weighted densities were 0; the result is the uninformative 0.5.
  bool underflow = false;
};

// The ratio is formed in extended precision. The smaller class probability
// is the quotient and the larger one is its complement, so
// member + non_member == 1 exactly.
Posterior PosteriorFromDensities(double member_density,
                                 double non_member_density,
                                 double prior_member);

class PosteriorModel {
 public:
  PosteriorModel(KdeModel member, KdeModel non_member, double prior_member)
      : member_(std::move(member)),
        non_member_(std::move(non_member)),
        prior_member_(prior_member) {}

  Posterior Evaluate(double distance) const {
    return PosteriorFromDensities(member_.Evaluate(distance),
                                  non_member_.Evaluate(distance),
                                  prior_member_);
  }

  const KdeModel& member() const { return member_; }
  const KdeModel& non_member() const { return non_member_; }
  double prior_member() const { return prior_member_; }

 private:
  KdeModel member_;
  KdeModel non_member_;
  double prior_member_;
};

struct AttackOutcome {
  size_t source_index = 0;
  double distance = 0.0;
  // For method 1 this is 1 for a predicted member and 0 otherwise.
  double posterior = 0.0;
  MembershipLabel predicted = MembershipLabel::kNonMember;
  MembershipLabel truth = MembershipLabel::kNonMember;
  bool underflow = false;
};

struct AttackOptions {
  BandwidthSpec bandwidth = BandwidthSpec::Scott();
  // Member iff posterior >= decision_threshold.
  double decision_threshold = 0.5;
  double prior_member = 0.5;
  int num_threads = 1;
};

absl::Status ValidateAttackOptions(const AttackOptions& options);

struct ThresholdGrid {
  std::vector<double> percentiles;  // strictly increasing, in (0, 100)
  std::vector<double> thresholds;   // distance value of each percentile
};

inline std::vector<double> DefaultPercentiles() {
  return {10, 20, 30, 40, 50, 60, 70, 80, 90};
}

// Linear-interpolation percentile of ascending `sorted` (p in [0, 100]).
double Percentile(std::span<const double> sorted, double p);

// Percentiles of the distances of every split record (train and test), or of
// all records when the table has not been split.
absl::StatusOr<ThresholdGrid> ResolveThresholds(
    const DistanceTable& table, std::vector<double> percentiles);

struct TrueDistributionResult {
  PosteriorModel model;
  std::vector<AttackOutcome> outcomes;  // test split order
};

absl::StatusOr<TrueDistributionResult> TrueDistributionAttack(
    const DistanceTable& table, const AttackOptions& options);

struct RealisticThresholdResult {
  double percentile = 0.0;
  double threshold = 0.0;
  size_t supposed_members = 0;
  size_t supposed_non_members = 0;
  // Set when a supposed class is too small to fit; nothing else is filled.
  std::optional<std::string> skip_reason;
  std::optional<PosteriorModel> model;
  std::vector<AttackOutcome> outcomes;
  // Largest rise of the posterior between neighbouring points of a 1000-point
  // grid; 0 when the posterior never increases with distance.
  double max_posterior_increase = 0.0;
};

// One entry per grid threshold. Fails only when every threshold is skipped.
absl::StatusOr<std::vector<RealisticThresholdResult>> RealisticAttack(
    const DistanceTable& table, const ThresholdGrid& grid,
    const AttackOptions& options);

struct Method1ThresholdResult {
  double percentile = 0.0;
  double threshold = 0.0;
  std::vector<AttackOutcome> outcomes;
};

absl::StatusOr<std::vector<Method1ThresholdResult>> Method1Attack(
    const DistanceTable& table, const ThresholdGrid& grid);

// Scores every test record with `model`.
std::vector<AttackOutcome> ScoreTestSplit(const PosteriorModel& model,
                                          const DistanceTable& table,
                                          double decision_threshold,
                                          int num_threads);

// Largest increase between consecutive posterior values on `points` evenly
// spaced distances in [lo, hi].
double MaxPosteriorIncrease(const PosteriorModel& model, double lo, double hi,
                            size_t points = 1000);

}  // namespace mirisk

#endif  // MIRISK_ATTACKS_H_
