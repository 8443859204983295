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

#include "drivestyle/kde.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "drivestyle/kernels.hpp"

namespace drivestyle {

namespace {

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (const double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  return 1.06 * sample_sd(values) *
         std::pow(static_cast<double>(values.size()), -1.0 / 5.0);
}

KdeModel::KdeModel(std::vector<double> points, double bandwidth)
    : points_(std::move(points)), bandwidth_(bandwidth) {
  if (points_.empty()) {
    throw std::invalid_argument("kde requires at least one training value");
  }
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw std::invalid_argument("kde bandwidth must be positive and finite");
  }
  for (const double p : points_) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("kde training values must be finite");
    }
  }
  norm_ = 1.0 / (static_cast<double>(points_.size()) *
                 std::pow(2.0 * std::numbers::pi * bandwidth_ * bandwidth_, 0.5 * kDim));
  inv_bw_ = 1.0 / bandwidth_;
}

KdeModel KdeModel::fit(std::span<const double> values, const BandwidthSpec& spec) {
  if (values.empty()) {
    throw std::invalid_argument("kde requires at least one training value");
  }
  double bandwidth = 0.0;
  switch (spec.mode) {
    case BandwidthSpec::Mode::Explicit:
      bandwidth = spec.value;
      break;
    case BandwidthSpec::Mode::Automatic: {
      const double sd = sample_sd(values);
      bandwidth = sd > 0.0 ? 1.06 * sd * std::pow(static_cast<double>(values.size()), -0.2)
                           : spec.zero_variance_floor;
      break;
    }
  }
  return KdeModel(std::vector<double>(values.begin(), values.end()), bandwidth);
}

double KdeModel::density_at(double x0) const {
  if (!fitted()) {
    throw std::logic_error("kde model is not fitted");
  }
  if (!std::isfinite(x0)) {
    throw std::invalid_argument("kde evaluation point must be finite");
  }
  return norm_ * kernels::gaussian_kernel_sum(points_, x0, inv_bw_);
}

}  // namespace drivestyle
