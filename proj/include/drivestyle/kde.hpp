// Copyright 2026-present the drivestyle project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drivestyle {

/// How to pick the kernel bandwidth when fitting.
struct BandwidthSpec {
  enum class Mode { Automatic, Explicit };

  Mode mode = Mode::Automatic;
  double value = 0.0;  // used when Explicit
  // Fallback bandwidth when the automatic rule sees zero-variance input,
  // chosen as 1e-3 of the feature's nominal range.
  double zero_variance_floor = 1e-3;

  static BandwidthSpec automatic(double zero_variance_floor) {
    return {Mode::Automatic, 0.0, zero_variance_floor};
  }
  static BandwidthSpec fixed(double value) { return {Mode::Explicit, value, 0.0}; }
};

// Nominal feature ranges used for the zero-variance bandwidth floors.
inline constexpr double kSpeedNominalRange = 120.0;     // km/h
inline constexpr double kThrottleNominalRange = 1.0;    // fraction
inline constexpr double kSpeedBandwidthFloor = 1e-3 * kSpeedNominalRange;
inline constexpr double kThrottleBandwidthFloor = 1e-3 * kThrottleNominalRange;

/// Gaussian kernel density estimate over one scalar feature: the density at
/// x0 is the normalized sum of Gaussian bumps of width `bandwidth` centered
/// on the stored training values. Evaluation is exact direct summation.
class KdeModel {
 public:
  // Univariate estimator; kept as an explicit formula parameter because the
  // normalization constant (2*pi*bandwidth^2)^(dim/2) generalizes with it.
  static constexpr int kDim = 1;

  KdeModel() = default;
  KdeModel(std::vector<double> points, double bandwidth);

  /// Stores all values and resolves the bandwidth spec. The automatic rule is
  /// 1.06 * sd * N^(-1/5) with the sample standard deviation, falling back to
  /// the spec's floor when the input has zero variance.
  static KdeModel fit(std::span<const double> values, const BandwidthSpec& spec);

  /// Density at x0, in 1/feature-units. Strictly positive for any x0 close
  /// enough to the stored points that the kernel terms stay above the
  /// floating-point underflow threshold.
  double density_at(double x0) const;

  bool fitted() const { return !points_.empty(); }
  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double bandwidth() const { return bandwidth_; }

 private:
  std::vector<double> points_;
  double bandwidth_ = 0.0;
  double norm_ = 0.0;      // 1 / (N * (2 pi bandwidth^2)^(dim/2))
  double inv_bw_ = 0.0;
};

/// Silverman's rule-of-thumb bandwidth; exposed for reporting.
double silverman_bandwidth(std::span<const double> values);

}  // namespace drivestyle
