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

// mirisk command-line tool.
//
//   mirisk run --train R.csv --unseen U.csv --synthetic S.csv --seed 7 --out dir
//   mirisk compare dir/report.json
//
// Exit status: 0 success, 2 risk detected (TPR above t times a resolvable
// FPR target), 1 error.

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mirisk/mirisk.h"

namespace {

constexpr int kExitError = 1;

struct ConfigDeleter {
  void operator()(mirisk_config* c) const { mirisk_config_free(c); }
};
struct ReportDeleter {
  void operator()(mirisk_report* r) const { mirisk_report_free(r); }
};

int ReportError(const char* what) {
  std::fprintf(stderr, "mirisk: %s: %s\n", what, mirisk_last_error());
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Membership disclosure risk of synthetic tabular data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mirisk_version()));

  // Options forwarded verbatim to mirisk_config_set, keyed by flag name.
  std::vector<std::pair<std::string, std::string>> values;
  const auto value_option = [&](CLI::App* cmd, const std::string& key,
                                const std::string& help) {
    values.emplace_back(key, "");
    return cmd->add_option("--" + key, values.back().second, help);
  };

  CLI::App* run = app.add_subcommand("run", "Evaluate membership risk");
  values.reserve(32);
  value_option(run, "train", "Training (member) records, CSV");
  value_option(run, "unseen", "Unseen (non-member) records, CSV");
  value_option(run, "synthetic", "Synthetic records, CSV");
  value_option(run, "schema", "Schema file: name = numeric [min max] | categorical");
  value_option(run, "attack", "true-dist | realistic | method1 | all")
      ->default_str("all");
  value_option(run, "percentiles", "Comma-separated threshold percentiles")
      ->default_str("10,20,30,40,50,60,70,80,90");
  value_option(run, "train-fraction", "Share of records used to fit densities")
      ->default_str("0.7");
  value_option(run, "bandwidth", "scott | fixed:<h>")->default_str("scott");
  value_option(run, "decision-threshold", "Member iff posterior >= this")
      ->default_str("0.5");
  value_option(run, "prior", "Member prior probability")->default_str("0.5");
  value_option(run, "fpr-targets", "Comma-separated FPR readouts")
      ->default_str("0.1,0.01,0.001");
  value_option(run, "risk-multiplier", "Flag when TPR > t * FPR")
      ->default_str("20");
  value_option(run, "seed", "Random seed (required)")->required();
  value_option(run, "distances-in", "Reuse a distances.csv instead of tables");
  value_option(run, "distances-out", "Also write the distance table here");
  value_option(run, "out", "Output directory")->required();
  value_option(run, "threads", "Worker threads (0 = all cores)")
      ->default_str("0");
  value_option(run, "density-grid", "Points in density-*.csv")
      ->default_str("512");
  bool no_range_normalize = false;
  bool balance_attack = false;
  bool no_balance_train = false;
  run->add_flag("--no-range-normalize", no_range_normalize,
                "Use raw absolute differences for numeric features");
  run->add_flag("--balance-attack", balance_attack,
                "Subsample the larger of training/unseen before distances");
  run->add_flag("--no-balance-train", no_balance_train,
                "Keep every non-test record in the training split");

  CLI::App* compare =
      app.add_subcommand("compare", "Realistic attack vs method 1 F1 table");
  std::string report_path;
  compare->add_option("report", report_path, "report.json from a run")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (*compare) {
    char* json = nullptr;
    if (mirisk_compare_report(report_path.c_str(), &json) != MIRISK_OK) {
      return ReportError("compare");
    }
    std::fputs(json, stdout);
    mirisk_string_free(json);
    return 0;
  }

  std::unique_ptr<mirisk_config, ConfigDeleter> config(mirisk_config_new());
  if (!config) return ReportError("config");
  for (const auto& [key, value] : values) {
    if (run->get_option("--" + key)->count() == 0) continue;
    if (mirisk_config_set(config.get(), key.c_str(), value.c_str()) !=
        MIRISK_OK) {
      return ReportError(("--" + key).c_str());
    }
  }
  const std::pair<const char*, bool> flags[] = {
      {"range-normalize", !no_range_normalize},
      {"balance-attack", balance_attack},
      {"balance-train", !no_balance_train},
  };
  for (const auto& [key, on] : flags) {
    if (mirisk_config_set(config.get(), key, on ? "true" : "false") !=
        MIRISK_OK) {
      return ReportError(key);
    }
  }

  mirisk_report* raw = nullptr;
  if (mirisk_run(config.get(), &raw) != MIRISK_OK) return ReportError("run");
  std::unique_ptr<mirisk_report, ReportDeleter> report(raw);
  const int code = mirisk_report_exit_code(report.get());
  if (code == 2) {
    std::fprintf(stderr,
                 "mirisk: risk detected: TPR exceeds the allowed multiple of "
                 "FPR (see report.json)\n");
  }
  return code;
}
