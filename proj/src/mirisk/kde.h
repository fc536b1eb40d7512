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

// Univariate Gaussian kernel density estimation.
//
//   p(x) = 1 / (n h) * sum_i phi((x - X_i) / h)
//
// with phi the standard normal density. No boundary correction is applied,
// so for nonnegative samples some mass lies below zero.

#ifndef MIRISK_KDE_H_
#define MIRISK_KDE_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace mirisk {

// Floor applied to Scott's bandwidth when the samples have (near) zero
// spread, e.g. when every nearest-neighbour distance is 0.
inline constexpr double kBandwidthFloor = 1e-9;

class BandwidthSpec {
 public:
  static BandwidthSpec Scott() { return BandwidthSpec(0.0); }
  static absl::StatusOr<BandwidthSpec> Fixed(double h);
  // "scott" or "fixed:<h>".
  static absl::StatusOr<BandwidthSpec> Parse(absl::string_view text);

  bool is_scott() const { return fixed_ == 0.0; }
  double fixed_value() const { return fixed_; }
  std::string ToString() const;

 private:
  explicit BandwidthSpec(double fixed) : fixed_(fixed) {}
  double fixed_;
};

struct ScottResult {
  double bandwidth = 0.0;
  // Set when the sample standard deviation fell below kBandwidthFloor.
  bool degenerate = false;
};

// h = sd * n^(-1/5), with sd the sample standard deviation (n - 1 divisor).
absl::StatusOr<ScottResult> ScottBandwidth(std::span<const double> samples);

class KdeModel {
 public:
  static absl::StatusOr<KdeModel> Fit(std::vector<double> samples,
                                      const BandwidthSpec& bandwidth);

  // Summed in sample order; far tails underflow to 0.
  double Evaluate(double x) const;

  const std::vector<double>& samples() const { return samples_; }
  double bandwidth() const { return bandwidth_; }
  bool degenerate() const { return degenerate_; }

 private:
  KdeModel(std::vector<double> samples, double bandwidth, bool degenerate)
      : samples_(std::move(samples)),
        bandwidth_(bandwidth),
        degenerate_(degenerate),
        scale_(1.0 / (static_cast<double>(samples_.size()) * bandwidth)) {}

  std::vector<double> samples_;
  double bandwidth_;
  bool degenerate_;
  double scale_;
};

}  // namespace mirisk

#endif  // MIRISK_KDE_H_
