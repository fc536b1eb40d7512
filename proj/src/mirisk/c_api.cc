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

#include "mirisk/mirisk.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "mirisk/attacks.h"
#include "mirisk/csv.h"
#include "mirisk/kde.h"
#include "mirisk/pipeline.h"

struct mirisk_config {
  mirisk::RunConfig config;
};

struct mirisk_report {
  mirisk::EvalReport report;
  std::string json;
};

struct mirisk_kde {
  mirisk::KdeModel model;
};

namespace {

thread_local std::string last_error;

mirisk_status ToStatus(const absl::Status& status) {
  if (status.ok()) return MIRISK_OK;
  last_error = std::string(status.message());
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
      return MIRISK_INVALID_ARGUMENT;
    case absl::StatusCode::kNotFound:
      return MIRISK_NOT_FOUND;
    case absl::StatusCode::kFailedPrecondition:
      return MIRISK_FAILED_PRECONDITION;
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kUnavailable:
      return MIRISK_IO_ERROR;
    default:
      return MIRISK_INTERNAL;
  }
}

mirisk_status Fail(mirisk_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

// Runs fn, turning escaped exceptions into MIRISK_INTERNAL.
template <typename Fn>
mirisk_status Guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return Fail(MIRISK_INTERNAL, absl::StrCat("internal error: ", e.what()));
  } catch (...) {
    return Fail(MIRISK_INTERNAL, "internal error");
  }
}

absl::StatusOr<double> ParseNumber(absl::string_view key,
                                   absl::string_view value) {
  const std::optional<double> v = mirisk::csv::ParseFiniteDouble(value);
  if (!v) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": '", value, "' is not a number"));
  }
  return *v;
}

absl::StatusOr<std::vector<double>> ParseNumberList(absl::string_view key,
                                                    absl::string_view value) {
  std::vector<double> out;
  for (absl::string_view part :
       absl::StrSplit(value, ',', absl::SkipWhitespace())) {
    absl::StatusOr<double> v = ParseNumber(key, part);
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  if (out.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(key, ": empty list"));
  }
  return out;
}

absl::StatusOr<bool> ParseBool(absl::string_view key, absl::string_view value) {
  const std::string v = absl::AsciiStrToLower(absl::StripAsciiWhitespace(value));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  return absl::InvalidArgumentError(
      absl::StrCat(key, ": expected true or false, got '", value, "'"));
}

absl::StatusOr<uint64_t> ParseUnsigned(absl::string_view key,
                                       absl::string_view value) {
  value = absl::StripAsciiWhitespace(value);
  uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() ||
      ptr != value.data() + value.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": '", value, "' is not a nonnegative integer"));
  }
  return out;
}

absl::Status SetOption(mirisk::RunConfig& c, absl::string_view key,
                       absl::string_view value) {
  const auto assign = [](auto& field, auto parsed) -> absl::Status {
    if (!parsed.ok()) return parsed.status();
    field = *std::move(parsed);
    return absl::OkStatus();
  };
  if (key == "train") return c.train_path = std::string(value), absl::OkStatus();
  if (key == "unseen") return c.unseen_path = std::string(value), absl::OkStatus();
  if (key == "synthetic") return c.synthetic_path = std::string(value), absl::OkStatus();
  if (key == "schema") return c.schema_path = std::string(value), absl::OkStatus();
  if (key == "distances-in") return c.distances_in = std::string(value), absl::OkStatus();
  if (key == "distances-out") return c.distances_out = std::string(value), absl::OkStatus();
  if (key == "out") return c.out_dir = std::string(value), absl::OkStatus();
  if (key == "attack") return assign(c.attack, mirisk::ParseAttackSelection(value));
  if (key == "percentiles") return assign(c.percentiles, ParseNumberList(key, value));
  if (key == "fpr-targets") return assign(c.fpr_targets, ParseNumberList(key, value));
  if (key == "train-fraction") return assign(c.train_fraction, ParseNumber(key, value));
  if (key == "decision-threshold") {
    return assign(c.decision_threshold, ParseNumber(key, value));
  }
  if (key == "prior") return assign(c.prior_member, ParseNumber(key, value));
  if (key == "risk-multiplier") {
    return assign(c.risk_multiplier, ParseNumber(key, value));
  }
  if (key == "bandwidth") {
    return assign(c.bandwidth, mirisk::BandwidthSpec::Parse(value));
  }
  if (key == "seed") {
    absl::StatusOr<uint64_t> seed = ParseUnsigned(key, value);
    if (!seed.ok()) return seed.status();
    c.seed = *seed;
    return absl::OkStatus();
  }
  if (key == "threads") {
    absl::StatusOr<uint64_t> n = ParseUnsigned(key, value);
    if (!n.ok()) return n.status();
    c.num_threads = static_cast<int>(std::min<uint64_t>(*n, 1024));
    return absl::OkStatus();
  }
  if (key == "density-grid") {
    absl::StatusOr<uint64_t> n = ParseUnsigned(key, value);
    if (!n.ok()) return n.status();
    c.density_grid_points = static_cast<size_t>(*n);
    return absl::OkStatus();
  }
  if (key == "range-normalize") return assign(c.range_normalize, ParseBool(key, value));
  if (key == "balance-attack") return assign(c.balance_attack, ParseBool(key, value));
  if (key == "balance-train") return assign(c.balance_train, ParseBool(key, value));
  return absl::InvalidArgumentError(absl::StrCat("unknown option '", key, "'"));
}

}  // namespace

extern "C" {

const char* mirisk_version(void) { return "1.0.0"; }

const char* mirisk_last_error(void) { return last_error.c_str(); }

mirisk_config* mirisk_config_new(void) {
  try {
    return new mirisk_config();
  } catch (...) {
    last_error = "out of memory";
    return nullptr;
  }
}

void mirisk_config_free(mirisk_config* config) { delete config; }

mirisk_status mirisk_config_set(mirisk_config* config, const char* key,
                                const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return Fail(MIRISK_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&] { return ToStatus(SetOption(config->config, key, value)); });
}

mirisk_status mirisk_run(const mirisk_config* config, mirisk_report** report) {
  if (config == nullptr || report == nullptr) {
    return Fail(MIRISK_INVALID_ARGUMENT, "null argument");
  }
  *report = nullptr;
  return Guarded([&] {
    absl::StatusOr<mirisk::EvalReport> result =
        mirisk::RunPipeline(config->config);
    if (!result.ok()) return ToStatus(result.status());
    std::string json = result->Serialize();
    *report = new mirisk_report{*std::move(result), std::move(json)};
    return MIRISK_OK;
  });
}

const char* mirisk_report_json(const mirisk_report* report) {
  return report == nullptr ? "" : report->json.c_str();
}

int mirisk_report_exit_code(const mirisk_report* report) {
  return report == nullptr ? 1 : report->report.exit_code();
}

void mirisk_report_free(mirisk_report* report) { delete report; }

mirisk_status mirisk_compare_report(const char* report_path, char** json) {
  if (report_path == nullptr || json == nullptr) {
    return Fail(MIRISK_INVALID_ARGUMENT, "null argument");
  }
  *json = nullptr;
  return Guarded([&] {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) {
      return Fail(MIRISK_NOT_FOUND,
                  absl::StrCat("cannot open '", report_path, "'"));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json report =
        nlohmann::json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
    if (report.is_discarded()) {
      return Fail(MIRISK_INVALID_ARGUMENT,
                  absl::StrCat("'", report_path, "' is not valid JSON"));
    }
    absl::StatusOr<nlohmann::json> table = mirisk::CompareAttacks(report);
    if (!table.ok()) return ToStatus(table.status());
    const std::string text = table->dump(2) + "\n";
    *json = static_cast<char*>(std::malloc(text.size() + 1));
    if (*json == nullptr) return Fail(MIRISK_INTERNAL, "out of memory");
    std::memcpy(*json, text.c_str(), text.size() + 1);
    return MIRISK_OK;
  });
}

void mirisk_string_free(char* str) { std::free(str); }

mirisk_status mirisk_kde_fit(const double* samples, size_t count,
                             double bandwidth, mirisk_kde** kde) {
  if (kde == nullptr || (samples == nullptr && count > 0)) {
    return Fail(MIRISK_INVALID_ARGUMENT, "null argument");
  }
  *kde = nullptr;
  return Guarded([&] {
    mirisk::BandwidthSpec spec = mirisk::BandwidthSpec::Scott();
    if (bandwidth != 0.0) {
      absl::StatusOr<mirisk::BandwidthSpec> fixed =
          mirisk::BandwidthSpec::Fixed(bandwidth);
      if (!fixed.ok()) return ToStatus(fixed.status());
      spec = *fixed;
    }
    absl::StatusOr<mirisk::KdeModel> model = mirisk::KdeModel::Fit(
        std::vector<double>(samples, samples + count), spec);
    if (!model.ok()) return ToStatus(model.status());
    *kde = new mirisk_kde{*std::move(model)};
    return MIRISK_OK;
  });
}

double mirisk_kde_eval(const mirisk_kde* kde, double x) {
  return kde == nullptr ? 0.0 : kde->model.Evaluate(x);
}

double mirisk_kde_bandwidth(const mirisk_kde* kde) {
  return kde == nullptr ? 0.0 : kde->model.bandwidth();
}

void mirisk_kde_free(mirisk_kde* kde) { delete kde; }

double mirisk_posterior(double member_density, double non_member_density,
                        double prior_member) {
  if (!(prior_member > 0.0 && prior_member < 1.0) ||
      !(member_density >= 0.0) || !(non_member_density >= 0.0) ||
      !std::isfinite(member_density) || !std::isfinite(non_member_density)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return mirisk::PosteriorFromDensities(member_density, non_member_density,
                                        prior_member)
      .member;
}

}  // extern "C"
