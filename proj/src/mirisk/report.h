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

// Sidecar file formats and JSON fragments of the evaluation report.

#ifndef MIRISK_REPORT_H_
#define MIRISK_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirisk/attacks.h"
#include "mirisk/kde.h"
#include "mirisk/metrics.h"

namespace mirisk {

inline constexpr int kReportVersion = 1;

// Header: source_index,distance,posterior,predicted,truth,attack,
// threshold_percentile. The percentile column is empty for the true
// distribution attack.
std::string OutcomesCsvHeader();
void AppendOutcomesCsv(std::span<const AttackOutcome> outcomes,
                       AttackKind attack, std::optional<double> percentile,
                       std::string& out);

// Header: fpr,tpr,threshold.
std::string FormatRocCsv(const RocCurve& curve);

// Header: x,member,non_member, on `points` evenly spaced values covering the
// samples of both densities padded by three bandwidths.
std::string FormatDensityCsv(const KdeModel& member,
                             const KdeModel& non_member, size_t points);

struct TrajectoryRow {
  AttackKind attack;
  double percentile;
  TrajectoryPoint point;
};

// Header: attack,percentile,tp,fp,tp_outpaces_fp.
std::string FormatTrajectoryCsv(std::span<const TrajectoryRow> rows);

// Metrics block shared by every scored attack run: confusion counts,
// accuracy, precision, recall and F1.
nlohmann::json ScoresJson(const ConfusionMatrix& cm);

nlohmann::json TprAtFprJson(std::span<const TprAtFpr> readouts);

// File-name fragment for a percentile, e.g. "p10" or "p12.5".
std::string PercentileTag(double percentile);

}  // namespace mirisk

#endif  // MIRISK_REPORT_H_
