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

#include "mirisk/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace mirisk {

ConfusionMatrix Confusion(std::span<const AttackOutcome> outcomes) {
  ConfusionMatrix cm;
  for (const AttackOutcome& o : outcomes) {
    const bool predicted = o.predicted == MembershipLabel::kMember;
    const bool actual = o.truth == MembershipLabel::kMember;
    if (predicted && actual) {
      ++cm.tp;
    } else if (predicted) {
      ++cm.fp;
    } else if (actual) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

ClassificationScores Scores(const ConfusionMatrix& cm) {
  ClassificationScores s;
  const auto ratio = [](size_t num, size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  s.accuracy = ratio(cm.tp + cm.tn, cm.total());
  s.precision = ratio(cm.tp, cm.tp + cm.fp);
  s.recall = ratio(cm.tp, cm.tp + cm.fn);
  s.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
  return s;
}

absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const MembershipLabel> truths) {
  if (scores.size() != truths.size()) {
    return absl::InvalidArgumentError("scores and labels differ in length");
  }
  RocCurve curve;
  for (MembershipLabel t : truths) {
    (t == MembershipLabel::kMember ? curve.positives : curve.negatives)++;
  }
  if (curve.positives == 0 || curve.negatives == 0) {
    return absl::InvalidArgumentError(
        "ROC needs both members and non-members");
  }
  for (double s : scores) {
    if (std::isnan(s)) return absl::InvalidArgumentError("NaN score");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  const double p = static_cast<double>(curve.positives);
  const double n = static_cast<double>(curve.negatives);
  curve.points.push_back(RocPoint{});
  size_t tp = 0;
  size_t fp = 0;
  // Twice the area in units of one positive times one negative; exact in
  // doubles for any realistic sample size.
  double doubled_area = 0.0;
  for (size_t i = 0; i < order.size();) {
    const double score = scores[order[i]];
    const size_t prev_tp = tp;
    const size_t prev_fp = fp;
    for (; i < order.size() && scores[order[i]] == score; ++i) {
      (truths[order[i]] == MembershipLabel::kMember ? tp : fp)++;
    }
    doubled_area += static_cast<double>(fp - prev_fp) *
                    static_cast<double>(tp + prev_tp);
    curve.points.push_back(RocPoint{static_cast<double>(fp) / n,
                                    static_cast<double>(tp) / p, score, tp,
                                    fp});
  }
  curve.auc = doubled_area / (2.0 * p * n);
  return curve;
}

absl::StatusOr<RocCurve> ComputeRoc(std::span<const AttackOutcome> outcomes) {
  std::vector<double> scores;
  std::vector<MembershipLabel> truths;
  scores.reserve(outcomes.size());
  truths.reserve(outcomes.size());
  for (const AttackOutcome& o : outcomes) {
    scores.push_back(o.posterior);
    truths.push_back(o.truth);
  }
  return ComputeRoc(scores, truths);
}

std::vector<TprAtFpr> TprAtFprTargets(const RocCurve& curve,
                                      std::span<const double> fpr_targets,
                                      double risk_multiplier) {
  std::vector<TprAtFpr> out;
  out.reserve(fpr_targets.size());
  for (double target : fpr_targets) {
    TprAtFpr r;
    r.target_fpr = target;
    for (const RocPoint& point : curve.points) {
      if (point.fpr <= target) r.tpr = std::max(r.tpr, point.tpr);
    }
    r.risk_ratio = r.tpr / target;
    r.sufficient_sample =
        static_cast<double>(curve.negatives) * target >= 1.0;
    r.flagged = r.sufficient_sample && r.risk_ratio > risk_multiplier;
    out.push_back(r);
  }
  return out;
}

double KolmogorovSurvival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  const double a2 = -2.0 * lambda * lambda;
  double sign = 2.0;
  double sum = 0.0;
  double previous_term = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(a2 * k * k);
    sum += term;
    if (std::fabs(term) <= 1e-10 * previous_term ||
        std::fabs(term) <= 1e-16 * std::fabs(sum)) {
      return std::clamp(sum, 0.0, 1.0);
    }
    sign = -sign;
    previous_term = std::fabs(term);
  }
  // The alternating series has not settled; only happens for tiny lambda.
  return 1.0;
}

absl::StatusOr<KsResult> KsTwoSample(std::span<const double> a,
                                     std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("KS test needs at least 2 values per sample, got ",
                     a.size(), " and ", b.size()));
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  size_t i = 0;
  size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    // |i/na - j/nb| from exact integer products, rounded once.
    const double gap = std::fabs(static_cast<double>(i) * nb -
                                 static_cast<double>(j) * na);
    d = std::max(d, gap / (na * nb));
  }
  const double ne = na * nb / (na + nb);
  const double root = std::sqrt(ne);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  return KsResult{d, KolmogorovSurvival(lambda)};
}

std::vector<TrajectoryPoint> TpFpTrajectory(
    std::span<const ConfusionMatrix> per_threshold) {
  std::vector<TrajectoryPoint> out;
  out.reserve(per_threshold.size());
  size_t prev_tp = 0;
  size_t prev_fp = 0;
  for (const ConfusionMatrix& cm : per_threshold) {
    const auto gain = [](size_t now, size_t before) {
      return static_cast<double>(now) - static_cast<double>(before);
    };
    out.push_back(TrajectoryPoint{
        cm.tp, cm.fp, gain(cm.tp, prev_tp) > gain(cm.fp, prev_fp)});
    prev_tp = cm.tp;
    prev_fp = cm.fp;
  }
  return out;
}

}  // namespace mirisk
