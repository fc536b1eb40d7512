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

// Classification and ROC metrics for attack outcomes. Member is the positive
// class throughout.

#ifndef MIRISK_METRICS_H_
#define MIRISK_METRICS_H_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "mirisk/attacks.h"
#include "mirisk/table.h"

namespace mirisk {

struct ConfusionMatrix {
  size_t tp = 0;
  size_t fp = 0;
  size_t tn = 0;
  size_t fn = 0;

  size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix Confusion(std::span<const AttackOutcome> outcomes);

struct ClassificationScores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Precision, recall and F1 are 0 when their denominators are 0.
ClassificationScores Scores(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Scores >= threshold are called members at this point. +inf at (0, 0).
  double threshold = std::numeric_limits<double>::infinity();
  size_t tp = 0;
  size_t fp = 0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0, 0) to (1, 1)
  double auc = 0.0;
  size_t positives = 0;
  size_t negatives = 0;
};

// One point per distinct score, in descending score order; tied records move
// together. Area by the trapezoid rule.
absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const MembershipLabel> truths);

absl::StatusOr<RocCurve> ComputeRoc(std::span<const AttackOutcome> outcomes);

inline std::vector<double> DefaultFprTargets() { return {1e-1, 1e-2, 1e-3}; }
inline constexpr double kDefaultRiskMultiplier = 20.0;

struct TprAtFpr {
  double target_fpr = 0.0;
  // Largest TPR over curve points with FPR <= target (0 if there is none).
  double tpr = 0.0;
  double risk_ratio = 0.0;  // tpr / target_fpr
  // The test set has at least 1 / target_fpr non-members, so the target FPR
  // is resolvable at all.
  bool sufficient_sample = false;
  // risk_ratio > multiplier on a sufficient sample.
  bool flagged = false;
};

std::vector<TprAtFpr> TprAtFprTargets(const RocCurve& curve,
                                      std::span<const double> fpr_targets,
                                      double risk_multiplier);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value,
// lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D, ne = na nb / (na + nb).
absl::StatusOr<KsResult> KsTwoSample(std::span<const double> a,
                                     std::span<const double> b);

// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), in [0, 1].
double KolmogorovSurvival(double lambda);

struct TrajectoryPoint {
  size_t tp = 0;
  size_t fp = 0;
  // TP grew by more than FP since the previous threshold (the first point is
  // compared with (0, 0)).
  bool tp_outpaces_fp = false;
};

// Expects matrices ordered by ascending threshold.
std::vector<TrajectoryPoint> TpFpTrajectory(
    std::span<const ConfusionMatrix> per_threshold);

}  // namespace mirisk

#endif  // MIRISK_METRICS_H_
