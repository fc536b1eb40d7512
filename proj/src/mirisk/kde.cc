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

#include "mirisk/kde.h"

#include <cmath>
#include <numbers>

#include "absl/strings/ascii.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "absl/strings/str_cat.h"
#include "mirisk/csv.h"
#include "mirisk/status_macros.h"

namespace mirisk {

absl::StatusOr<BandwidthSpec> BandwidthSpec::Fixed(double h) {
  if (!std::isfinite(h) || h <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("bandwidth must be positive, got ", h));
  }
  return BandwidthSpec(h);
}

absl::StatusOr<BandwidthSpec> BandwidthSpec::Parse(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  if (text == "scott") return Scott();
  if (absl::ConsumePrefix(&text, "fixed:")) {
    const std::optional<double> h = csv::ParseFiniteDouble(text);
    if (!h) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad fixed bandwidth '", text, "'"));
    }
    return Fixed(*h);
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "bandwidth must be 'scott' or 'fixed:<value>', got '", text, "'"));
}

std::string BandwidthSpec::ToString() const {
  return is_scott() ? "scott" : absl::StrCat("fixed:", csv::FormatDouble(fixed_));
}

absl::StatusOr<ScottResult> ScottBandwidth(std::span<const double> samples) {
  const size_t n = samples.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        "Scott's rule needs at least 2 samples");
  }
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double squares = 0.0;
  for (double x : samples) squares += (x - mean) * (x - mean);
  const double sd = std::sqrt(squares / static_cast<double>(n - 1));
  if (!(sd >= kBandwidthFloor)) return ScottResult{kBandwidthFloor, true};
  return ScottResult{sd * std::pow(static_cast<double>(n), -0.2), false};
}

absl::StatusOr<KdeModel> KdeModel::Fit(std::vector<double> samples,
                                       const BandwidthSpec& bandwidth) {
  if (samples.empty()) {
    return absl::InvalidArgumentError("cannot fit a KDE to zero samples");
  }
  for (double x : samples) {
    if (!std::isfinite(x)) {
      return absl::InvalidArgumentError("KDE samples must be finite");
    }
  }
  if (!bandwidth.is_scott()) {
    return KdeModel(std::move(samples), bandwidth.fixed_value(), false);
  }
  MIRISK_ASSIGN_OR_RETURN(ScottResult scott, ScottBandwidth(samples));
  return KdeModel(std::move(samples), scott.bandwidth, scott.degenerate);
}

double KdeModel::Evaluate(double x) const {
  constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi *
                                 std::numbers::sqrt2;
  const double inv_h = 1.0 / bandwidth_;
  double sum = 0.0;
  for (double s : samples_) {
    const double z = (x - s) * inv_h;
    sum += std::exp(-0.5 * z * z);
  }
  return sum * kInvSqrt2Pi * scale_;
}

}  // namespace mirisk
