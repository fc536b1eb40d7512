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

// End-to-end risk evaluation: ingest, attack dataset, nearest-neighbour
// distances, split, attacks, metrics, report.
//
// Outputs written to RunConfig::out_dir:
//   report.json                  versioned JSON report
//   distances.csv                source_index,distance,label
//   outcomes-<attack>.csv        per scored test record
//   roc-<attack>[-p<pct>].csv    fpr,tpr,threshold
//   density-<attack>[-p<pct>].csv  fitted densities on a grid
//   trajectory.csv               TP/FP counts per percentile threshold
//
// Nothing is written unless the whole evaluation succeeds.

#ifndef MIRISK_PIPELINE_H_
#define MIRISK_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "mirisk/attacks.h"
#include "mirisk/kde.h"
#include "mirisk/metrics.h"

namespace mirisk {

enum class AttackSelection { kTrueDistribution, kRealistic, kMethod1, kAll };

absl::StatusOr<AttackSelection> ParseAttackSelection(absl::string_view text);
absl::string_view AttackSelectionName(AttackSelection selection);

struct RunConfig {
  std::string train_path;
  std::string unseen_path;
  std::string synthetic_path;
  std::string schema_path;  // empty: infer column kinds
  // When set, distances are read from this file and the three tables are not
  // needed.
  std::string distances_in;
  std::string distances_out;
  std::string out_dir;

  AttackSelection attack = AttackSelection::kAll;
  std::vector<double> percentiles = DefaultPercentiles();
  double train_fraction = 0.7;
  BandwidthSpec bandwidth = BandwidthSpec::Scott();
  double decision_threshold = 0.5;
  double prior_member = 0.5;
  std::vector<double> fpr_targets = DefaultFprTargets();
  double risk_multiplier = kDefaultRiskMultiplier;
  // Required. There is deliberately no clock-based default.
  std::optional<uint64_t> seed;
  // Subsample the larger of the training/unseen tables before distances.
  bool balance_attack = false;
  // Equal member and non-member counts in the KDE training split.
  bool balance_train = true;
  bool range_normalize = true;
  // <= 0 uses every hardware thread. Never affects results.
  int num_threads = 0;
  size_t density_grid_points = 512;
};

absl::Status ValidateRunConfig(const RunConfig& config);

struct EvalReport {
  nlohmann::json json;
  bool risk_detected = false;

  // 0 when no TPR-at-FPR readout breaks the risk rule, 2 otherwise.
  int exit_code() const { return risk_detected ? 2 : 0; }
  // Canonical serialisation, identical for identical inputs.
  std::string Serialize() const;
};

struct PipelineResult {
  EvalReport report;
  // (file name, contents) for every artifact, report.json included.
  std::vector<std::pair<std::string, std::string>> files;
};

// Runs every stage in memory without touching the output directory.
absl::StatusOr<PipelineResult> EvaluatePipeline(const RunConfig& config);

// EvaluatePipeline, then writes the artifacts to config.out_dir (created if
// needed) and the distance table to config.distances_out when set.
absl::StatusOr<EvalReport> RunPipeline(const RunConfig& config);

// Per-percentile F1 of the realistic attack against method 1, flagging where
// the realistic attack also beats the true distribution attack. Requires the
// realistic and method1 sections.
absl::StatusOr<nlohmann::json> CompareAttacks(const nlohmann::json& report);

}  // namespace mirisk

#endif  // MIRISK_PIPELINE_H_
