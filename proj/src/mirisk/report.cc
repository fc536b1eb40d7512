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

#include "mirisk/report.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "mirisk/csv.h"

namespace mirisk {

std::string OutcomesCsvHeader() {
  return "source_index,distance,posterior,predicted,truth,attack,"
         "threshold_percentile\n";
}

void AppendOutcomesCsv(std::span<const AttackOutcome> outcomes,
                       AttackKind attack, std::optional<double> percentile,
                       std::string& out) {
  const std::string tail =
      absl::StrCat(",", AttackName(attack), ",",
                   percentile ? csv::FormatDouble(*percentile) : "", "\n");
  for (const AttackOutcome& o : outcomes) {
    absl::StrAppend(&out, o.source_index, ",", csv::FormatDouble(o.distance),
                    ",", csv::FormatDouble(o.posterior), ",",
                    LabelValue(o.predicted), ",", LabelValue(o.truth), tail);
  }
}

std::string FormatRocCsv(const RocCurve& curve) {
  std::string out = "fpr,tpr,threshold\n";
  for (const RocPoint& p : curve.points) {
    absl::StrAppend(&out, csv::FormatDouble(p.fpr), ",",
                    csv::FormatDouble(p.tpr), ",",
                    csv::FormatDouble(p.threshold), "\n");
  }
  return out;
}

std::string FormatDensityCsv(const KdeModel& member,
                             const KdeModel& non_member, size_t points) {
  points = std::max<size_t>(points, 2);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const KdeModel* m : {&member, &non_member}) {
    const auto [mn, mx] =
        std::minmax_element(m->samples().begin(), m->samples().end());
    lo = std::min(lo, *mn - 3.0 * m->bandwidth());
    hi = std::max(hi, *mx + 3.0 * m->bandwidth());
  }
  std::string out = "x,member,non_member\n";
  for (size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    absl::StrAppend(&out, csv::FormatDouble(x), ",",
                    csv::FormatDouble(member.Evaluate(x)), ",",
                    csv::FormatDouble(non_member.Evaluate(x)), "\n");
  }
  return out;
}

std::string FormatTrajectoryCsv(std::span<const TrajectoryRow> rows) {
  std::string out = "attack,percentile,tp,fp,tp_outpaces_fp\n";
  for (const TrajectoryRow& row : rows) {
    absl::StrAppend(&out, AttackName(row.attack), ",",
                    csv::FormatDouble(row.percentile), ",", row.point.tp, ",",
                    row.point.fp, ",", row.point.tp_outpaces_fp ? 1 : 0, "\n");
  }
  return out;
}

nlohmann::json ScoresJson(const ConfusionMatrix& cm) {
  const ClassificationScores s = Scores(cm);
  return nlohmann::json{
      {"confusion",
       {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}}},
      {"accuracy", s.accuracy},
      {"precision", s.precision},
      {"recall", s.recall},
      {"f1", s.f1},
  };
}

nlohmann::json TprAtFprJson(std::span<const TprAtFpr> readouts) {
  nlohmann::json out = nlohmann::json::array();
  for (const TprAtFpr& r : readouts) {
    out.push_back({{"fpr", r.target_fpr},
                   {"tpr", r.tpr},
                   {"risk_ratio", r.risk_ratio},
                   {"sufficient_sample", r.sufficient_sample},
                   {"status", r.sufficient_sample ? "ok" : "insufficient sample"},
                   {"flagged", r.flagged}});
  }
  return out;
}

std::string PercentileTag(double percentile) {
  return absl::StrCat("p", csv::FormatDouble(percentile));
}

}  // namespace mirisk
