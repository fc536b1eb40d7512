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

#include "mirisk/pipeline.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mirisk/csv.h"
#include "mirisk/distance.h"
#include "mirisk/report.h"
#include "mirisk/status_macros.h"
#include "mirisk/table.h"

namespace mirisk {
namespace {

using nlohmann::json;

// Streams derived from the run seed, one per randomised stage.
constexpr uint64_t kSplitSeedSalt = 0x9E3779B97F4A7C15ULL;

absl::Status Tagged(const absl::Status& status, absl::string_view module) {
  if (status.ok()) return status;
  return absl::Status(status.code(),
                      absl::StrCat("[", module, "] ", status.message()));
}

template <typename T>
absl::StatusOr<T> Tagged(absl::StatusOr<T> value, absl::string_view module) {
  if (value.ok()) return value;
  return Tagged(value.status(), module);
}

bool Selected(AttackSelection selection, AttackKind kind) {
  switch (selection) {
    case AttackSelection::kAll:
      return true;
    case AttackSelection::kTrueDistribution:
      return kind == AttackKind::kTrueDistribution;
    case AttackSelection::kRealistic:
      return kind == AttackKind::kRealistic;
    case AttackSelection::kMethod1:
      return kind == AttackKind::kMethod1;
  }
  return false;
}

json DoublesJson(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(v);
  return out;
}

json ConfigJson(const RunConfig& config) {
  return json{
      {"train", config.train_path},
      {"unseen", config.unseen_path},
      {"synthetic", config.synthetic_path},
      {"schema", config.schema_path},
      {"distances_in", config.distances_in},
      {"attack", AttackSelectionName(config.attack)},
      {"percentiles", DoublesJson(config.percentiles)},
      {"train_fraction", config.train_fraction},
      {"bandwidth", config.bandwidth.ToString()},
      {"decision_threshold", config.decision_threshold},
      {"prior_member", config.prior_member},
      {"fpr_targets", DoublesJson(config.fpr_targets)},
      {"risk_multiplier", config.risk_multiplier},
      {"seed", *config.seed},
      {"balance_attack", config.balance_attack},
      {"balance_train", config.balance_train},
      {"range_normalize", config.range_normalize},
      {"density_grid_points", config.density_grid_points},
  };
}

json KdeJson(const PosteriorModel& model) {
  return json{
      {"member_bandwidth", model.member().bandwidth()},
      {"non_member_bandwidth", model.non_member().bandwidth()},
      {"member_degenerate", model.member().degenerate()},
      {"non_member_degenerate", model.non_member().degenerate()},
      {"member_samples", model.member().samples().size()},
      {"non_member_samples", model.non_member().samples().size()},
  };
}

// Metrics of one posterior-scored run. Sets *flagged when a readout breaks
// the risk rule.
absl::StatusOr<json> ScoredRunJson(std::span<const AttackOutcome> outcomes,
                                   const RunConfig& config, RocCurve* roc,
                                   bool* flagged) {
  const ConfusionMatrix cm = Confusion(outcomes);
  json out = ScoresJson(cm);
  MIRISK_ASSIGN_OR_RETURN(*roc, Tagged(ComputeRoc(outcomes), "metrics"));
  out["auc"] = roc->auc;
  const std::vector<TprAtFpr> readouts =
      TprAtFprTargets(*roc, config.fpr_targets, config.risk_multiplier);
  out["tpr_at_fpr"] = TprAtFprJson(readouts);
  *flagged = std::any_of(readouts.begin(), readouts.end(),
                         [](const TprAtFpr& r) { return r.flagged; });
  out["risk_flagged"] = *flagged;
  size_t underflows = 0;
  for (const AttackOutcome& o : outcomes) underflows += o.underflow ? 1 : 0;
  out["posterior_underflows"] = underflows;
  return out;
}

std::string SplitCsv(const DistanceTable& table) {
  std::vector<const char*> role(table.records.size(), "unused");
  for (size_t i : table.train_indices) role[i] = "train";
  for (size_t i : table.test_indices) role[i] = "test";
  std::string out = "source_index,split\n";
  for (size_t i = 0; i < table.records.size(); ++i) {
    absl::StrAppend(&out, table.records[i].source_index, ",", role[i], "\n");
  }
  return out;
}

}  // namespace

absl::StatusOr<AttackSelection> ParseAttackSelection(absl::string_view text) {
  if (text == "all") return AttackSelection::kAll;
  if (text == "true-dist" || text == "true_distribution") {
    return AttackSelection::kTrueDistribution;
  }
  if (text == "realistic") return AttackSelection::kRealistic;
  if (text == "method1") return AttackSelection::kMethod1;
  return absl::InvalidArgumentError(absl::StrCat(
      "attack must be one of true-dist, realistic, method1, all; got '", text,
      "'"));
}

absl::string_view AttackSelectionName(AttackSelection selection) {
  switch (selection) {
    case AttackSelection::kAll:
      return "all";
    case AttackSelection::kTrueDistribution:
      return "true-dist";
    case AttackSelection::kRealistic:
      return "realistic";
    case AttackSelection::kMethod1:
      return "method1";
  }
  return "all";
}

absl::Status ValidateRunConfig(const RunConfig& config) {
  if (!config.seed.has_value()) {
    return absl::InvalidArgumentError("a seed is required");
  }
  if (config.distances_in.empty() &&
      (config.train_path.empty() || config.unseen_path.empty() ||
       config.synthetic_path.empty())) {
    return absl::InvalidArgumentError(
        "training, unseen and synthetic tables are required unless a "
        "distance table is given");
  }
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        "train fraction must lie strictly between 0 and 1");
  }
  AttackOptions options;
  options.decision_threshold = config.decision_threshold;
  options.prior_member = config.prior_member;
  MIRISK_RETURN_IF_ERROR(ValidateAttackOptions(options));
  for (double target : config.fpr_targets) {
    if (!(target > 0.0 && target < 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "FPR target ", target, " is outside (0, 1)"));
    }
  }
  if (!(config.risk_multiplier > 0.0) || !std::isfinite(config.risk_multiplier)) {
    return absl::InvalidArgumentError("risk multiplier must be positive");
  }
  if (config.percentiles.empty()) {
    return absl::InvalidArgumentError("at least one percentile is required");
  }
  for (double p : config.percentiles) {
    if (!(p > 0.0 && p < 100.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("percentile ", p, " is outside (0, 100)"));
    }
  }
  if (config.density_grid_points < 2) {
    return absl::InvalidArgumentError("density grid needs at least 2 points");
  }
  return absl::OkStatus();
}

std::string EvalReport::Serialize() const { return json.dump(2) + "\n"; }

absl::StatusOr<PipelineResult> EvaluatePipeline(const RunConfig& config) {
  MIRISK_RETURN_IF_ERROR(Tagged(ValidateRunConfig(config), "config"));
  const uint64_t seed = *config.seed;

  json dataset;
  json warnings = json::array();
  DistanceTable distances;
  if (!config.distances_in.empty()) {
    MIRISK_ASSIGN_OR_RETURN(
        distances,
        Tagged(LoadDistanceTable(config.distances_in), "distance_engine"));
    distances.range_normalized = config.range_normalize;
    dataset["distance_source"] = "distances_in";
  } else {
    std::optional<Schema> schema;
    if (!config.schema_path.empty()) {
      MIRISK_ASSIGN_OR_RETURN(
          schema, Tagged(LoadSchema(config.schema_path), "tabular_core"));
    }
    MIRISK_ASSIGN_OR_RETURN(
        Table train,
        Tagged(LoadTable(config.train_path, schema), "tabular_core"));
    MIRISK_ASSIGN_OR_RETURN(
        Table unseen,
        Tagged(LoadTable(config.unseen_path, schema), "tabular_core"));
    MIRISK_ASSIGN_OR_RETURN(
        Table synthetic,
        Tagged(LoadTable(config.synthetic_path, schema), "tabular_core"));
    if (!SameLayout(train.schema(), synthetic.schema())) {
      return absl::InvalidArgumentError(
          "[tabular_core] synthetic table schema differs from the training "
          "table");
    }
    MIRISK_ASSIGN_OR_RETURN(
        AttackDataset attack,
        Tagged(BuildAttackDataset(train, unseen, config.balance_attack, seed),
               "tabular_core"));
    MIRISK_ASSIGN_OR_RETURN(
        GowerContext ctx,
        Tagged(GowerContext::Create(attack.table, synthetic,
                                    config.range_normalize),
               "distance_engine"));
    MIRISK_ASSIGN_OR_RETURN(
        distances,
        Tagged(NearestNeighborDistances(attack, synthetic, ctx,
                                        config.num_threads),
               "distance_engine"));
    dataset["distance_source"] = "tables";
    dataset["train_rows"] = train.num_rows();
    dataset["unseen_rows"] = unseen.num_rows();
    dataset["synthetic_rows"] = synthetic.num_rows();
    dataset["features"] = ctx.schema().size();
    dataset["train_unseen_duplicates"] = attack.cross_duplicates;
    json features = json::array();
    for (size_t f = 0; f < ctx.schema().size(); ++f) {
      const FeatureSpec& spec = ctx.schema()[f];
      json feature{{"name", spec.name}, {"kind", FeatureKindName(spec.kind)}};
      if (spec.kind == FeatureKind::kNumeric) {
        feature["range"] = ctx.range(f);
        feature["range_declared"] = spec.range_declared;
      }
      features.push_back(std::move(feature));
    }
    dataset["schema"] = std::move(features);
    const std::vector<std::string> constant = ctx.ConstantFeatures();
    dataset["constant_features"] = constant;
    for (const std::string& name : constant) {
      warnings.push_back(absl::StrCat(
          "numeric feature '", name,
          "' has zero range; it contributes 0 for equal values, 1 otherwise"));
    }
  }
  dataset["range_normalized"] = distances.range_normalized;
  dataset["distance_metric"] =
      distances.range_normalized ? "gower" : "gower_unnormalized";

  size_t members = 0;
  for (const DistanceRecord& r : distances.records) {
    members += r.label == MembershipLabel::kMember ? 1 : 0;
  }
  dataset["attack_records"] = distances.records.size();
  dataset["members"] = members;
  dataset["non_members"] = distances.records.size() - members;

  MIRISK_ASSIGN_OR_RETURN(
      DistanceTable split,
      Tagged(SplitDistances(distances, config.train_fraction,
                            config.balance_train, seed ^ kSplitSeedSalt),
             "distance_engine"));
  {
    size_t train_members = 0;
    size_t test_members = 0;
    for (size_t i : split.train_indices) {
      train_members += split.records[i].label == MembershipLabel::kMember;
    }
    for (size_t i : split.test_indices) {
      test_members += split.records[i].label == MembershipLabel::kMember;
    }
    dataset["split"] = json{
        {"train", split.train_indices.size()},
        {"test", split.test_indices.size()},
        {"train_members", train_members},
        {"train_non_members", split.train_indices.size() - train_members},
        {"test_members", test_members},
        {"test_non_members", split.test_indices.size() - test_members},
        {"unused",
         split.records.size() - split.train_indices.size() -
             split.test_indices.size()},
    };
  }
  dataset["kde_fit_split"] = "train";
  dataset["kde_boundary_correction"] = "none";

  json report;
  report["report_version"] = kReportVersion;
  report["config"] = ConfigJson(config);

  // Distinguishability of member and non-member training distances.
  {
    std::vector<double> member_d;
    std::vector<double> non_member_d;
    for (size_t i : split.train_indices) {
      (split.records[i].label == MembershipLabel::kMember ? member_d
                                                          : non_member_d)
          .push_back(split.records[i].distance);
    }
    absl::StatusOr<KsResult> ks = KsTwoSample(member_d, non_member_d);
    if (ks.ok()) {
      report["ks_test"] = json{{"statistic", ks->statistic},
                               {"p_value", ks->p_value},
                               {"member_samples", member_d.size()},
                               {"non_member_samples", non_member_d.size()}};
    } else {
      report["ks_test"] = nullptr;
      warnings.push_back(absl::StrCat("KS test skipped: ", ks.status().message()));
    }
  }

  AttackOptions options;
  options.bandwidth = config.bandwidth;
  options.decision_threshold = config.decision_threshold;
  options.prior_member = config.prior_member;
  options.num_threads = config.num_threads;

  PipelineResult result;
  auto& files = result.files;
  bool risk = false;
  json attacks = json::object();
  json heatmap = json::array();
  std::vector<TrajectoryRow> trajectory_rows;
  json trajectory = json::object();

  if (Selected(config.attack, AttackKind::kTrueDistribution)) {
    MIRISK_ASSIGN_OR_RETURN(
        TrueDistributionResult run,
        Tagged(TrueDistributionAttack(split, options), "attacks"));
    RocCurve roc;
    bool flagged = false;
    MIRISK_ASSIGN_OR_RETURN(
        json section, ScoredRunJson(run.outcomes, config, &roc, &flagged));
    section["kde"] = KdeJson(run.model);
    if (run.model.member().degenerate() || run.model.non_member().degenerate()) {
      warnings.push_back(
          "true distribution attack: degenerate distances, bandwidth floored");
    }
    risk = risk || flagged;
    attacks["true_distribution"] = std::move(section);
    std::string outcomes = OutcomesCsvHeader();
    AppendOutcomesCsv(run.outcomes, AttackKind::kTrueDistribution,
                      std::nullopt, outcomes);
    files.emplace_back("outcomes-true_distribution.csv", std::move(outcomes));
    files.emplace_back("roc-true_distribution.csv", FormatRocCsv(roc));
    files.emplace_back("density-true_distribution.csv",
                       FormatDensityCsv(run.model.member(),
                                        run.model.non_member(),
                                        config.density_grid_points));
  }

  const bool want_realistic = Selected(config.attack, AttackKind::kRealistic);
  const bool want_method1 = Selected(config.attack, AttackKind::kMethod1);
  if (want_realistic || want_method1) {
    MIRISK_ASSIGN_OR_RETURN(
        ThresholdGrid grid,
        Tagged(ResolveThresholds(split, config.percentiles), "attacks"));

    if (want_realistic) {
      MIRISK_ASSIGN_OR_RETURN(
          std::vector<RealisticThresholdResult> runs,
          Tagged(RealisticAttack(split, grid, options), "attacks"));
      json rows = json::array();
      json traj = json::array();
      std::vector<ConfusionMatrix> matrices;
      std::vector<double> fitted_percentiles;
      std::string outcomes = OutcomesCsvHeader();
      for (const RealisticThresholdResult& run : runs) {
        json row{{"percentile", run.percentile},
                 {"threshold", run.threshold},
                 {"supposed_members", run.supposed_members},
                 {"supposed_non_members", run.supposed_non_members},
                 {"skipped", run.skip_reason.has_value()}};
        if (run.skip_reason) {
          row["skip_reason"] = *run.skip_reason;
          warnings.push_back(absl::StrCat("realistic attack: percentile ",
                                          csv::FormatDouble(run.percentile),
                                          " skipped (", *run.skip_reason, ")"));
          rows.push_back(std::move(row));
          continue;
        }
        RocCurve roc;
        bool flagged = false;
        MIRISK_ASSIGN_OR_RETURN(
            json metrics, ScoredRunJson(run.outcomes, config, &roc, &flagged));
        row.update(metrics);
        row["kde"] = KdeJson(*run.model);
        row["max_posterior_increase"] = run.max_posterior_increase;
        risk = risk || flagged;
        const std::string tag = PercentileTag(run.percentile);
        AppendOutcomesCsv(run.outcomes, AttackKind::kRealistic, run.percentile,
                          outcomes);
        files.emplace_back(absl::StrCat("roc-realistic-", tag, ".csv"),
                           FormatRocCsv(roc));
        files.emplace_back(
            absl::StrCat("density-realistic-", tag, ".csv"),
            FormatDensityCsv(run.model->member(), run.model->non_member(),
                             config.density_grid_points));
        heatmap.push_back({{"attack", "realistic"},
                           {"percentile", run.percentile},
                           {"accuracy", row["accuracy"]},
                           {"f1", row["f1"]}});
        matrices.push_back(Confusion(run.outcomes));
        fitted_percentiles.push_back(run.percentile);
        rows.push_back(std::move(row));
      }
      const std::vector<TrajectoryPoint> points = TpFpTrajectory(matrices);
      for (size_t k = 0; k < points.size(); ++k) {
        trajectory_rows.push_back(
            {AttackKind::kRealistic, fitted_percentiles[k], points[k]});
        traj.push_back({{"percentile", fitted_percentiles[k]},
                        {"tp", points[k].tp},
                        {"fp", points[k].fp},
                        {"tp_outpaces_fp", points[k].tp_outpaces_fp}});
      }
      trajectory["realistic"] = std::move(traj);
      attacks["realistic"] = json{{"thresholds", std::move(rows)}};
      files.emplace_back("outcomes-realistic.csv", std::move(outcomes));
    }

    if (want_method1) {
      MIRISK_ASSIGN_OR_RETURN(std::vector<Method1ThresholdResult> runs,
                              Tagged(Method1Attack(split, grid), "attacks"));
      json rows = json::array();
      json traj = json::array();
      std::vector<ConfusionMatrix> matrices;
      std::string outcomes = OutcomesCsvHeader();
      for (const Method1ThresholdResult& run : runs) {
        const ConfusionMatrix cm = Confusion(run.outcomes);
        json row = ScoresJson(cm);
        row["percentile"] = run.percentile;
        row["threshold"] = run.threshold;
        heatmap.push_back({{"attack", "method1"},
                           {"percentile", run.percentile},
                           {"accuracy", row["accuracy"]},
                           {"f1", row["f1"]}});
        AppendOutcomesCsv(run.outcomes, AttackKind::kMethod1, run.percentile,
                          outcomes);
        matrices.push_back(cm);
        rows.push_back(std::move(row));
      }
      const std::vector<TrajectoryPoint> points = TpFpTrajectory(matrices);
      for (size_t k = 0; k < points.size(); ++k) {
        trajectory_rows.push_back(
            {AttackKind::kMethod1, runs[k].percentile, points[k]});
        traj.push_back({{"percentile", runs[k].percentile},
                        {"tp", points[k].tp},
                        {"fp", points[k].fp},
                        {"tp_outpaces_fp", points[k].tp_outpaces_fp}});
      }
      trajectory["method1"] = std::move(traj);
      attacks["method1"] =
          json{{"probabilistic", false}, {"thresholds", std::move(rows)}};
      files.emplace_back("outcomes-method1.csv", std::move(outcomes));
    }
    files.emplace_back("trajectory.csv", FormatTrajectoryCsv(trajectory_rows));
  }

  report["dataset"] = std::move(dataset);
  report["attacks"] = std::move(attacks);
  report["heatmap"] = std::move(heatmap);
  report["trajectory"] = std::move(trajectory);
  if (want_realistic && want_method1) {
    MIRISK_ASSIGN_OR_RETURN(report["comparison"],
                            Tagged(CompareAttacks(report), "cli_report"));
  }
  report["warnings"] = std::move(warnings);
  report["risk_detected"] = risk;

  files.emplace_back("distances.csv", FormatDistanceTable(distances));
  files.emplace_back("split.csv", SplitCsv(split));
  result.report = EvalReport{std::move(report), risk};
  files.emplace_back("report.json", result.report.Serialize());
  return result;
}

absl::StatusOr<EvalReport> RunPipeline(const RunConfig& config) {
  if (config.out_dir.empty()) {
    return absl::InvalidArgumentError("[config] an output directory is required");
  }
  MIRISK_ASSIGN_OR_RETURN(PipelineResult result, EvaluatePipeline(config));
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("[cli_report] cannot create '", config.out_dir,
                     "': ", ec.message()));
  }
  for (const auto& [name, contents] : result.files) {
    const std::string path = (std::filesystem::path(config.out_dir) / name).string();
    MIRISK_RETURN_IF_ERROR(Tagged(csv::WriteFile(path, contents), "cli_report"));
  }
  if (!config.distances_out.empty()) {
    for (const auto& [name, contents] : result.files) {
      if (name == "distances.csv") {
        MIRISK_RETURN_IF_ERROR(Tagged(
            csv::WriteFile(config.distances_out, contents), "cli_report"));
      }
    }
  }
  return std::move(result.report);
}

absl::StatusOr<json> CompareAttacks(const json& report) {
  const json* attacks =
      report.contains("attacks") ? &report.at("attacks") : nullptr;
  if (attacks == nullptr || !attacks->contains("realistic") ||
      !attacks->contains("method1")) {
    return absl::FailedPreconditionError(
        "comparison needs both the realistic and the method1 sections");
  }
  json rows = json::array();
  try {
    std::optional<double> true_f1;
    if (attacks->contains("true_distribution")) {
      true_f1 = attacks->at("true_distribution").at("f1").get<double>();
    }
    for (const json& m1 : attacks->at("method1").at("thresholds")) {
      const double percentile = m1.at("percentile").get<double>();
      json row{{"percentile", percentile},
               {"method1_f1", m1.at("f1")},
               {"realistic_f1", nullptr},
               {"f1_delta", nullptr},
               {"realistic_exceeds_true_distribution", nullptr}};
      for (const json& re : attacks->at("realistic").at("thresholds")) {
        if (re.at("percentile").get<double>() != percentile ||
            re.at("skipped").get<bool>()) {
          continue;
        }
        const double realistic_f1 = re.at("f1").get<double>();
        row["realistic_f1"] = realistic_f1;
        row["f1_delta"] = realistic_f1 - m1.at("f1").get<double>();
        if (true_f1) {
          row["realistic_exceeds_true_distribution"] = realistic_f1 > *true_f1;
        }
      }
      rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report: ", e.what()));
  }
  return json{{"realistic_vs_method1", std::move(rows)}};
}

}  // namespace mirisk
