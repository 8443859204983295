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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "drivestyle/kde.hpp"
#include "drivestyle/telemetry.hpp"

namespace drivestyle {

/// Seven-grade style scale with the near-tie band split by sign, ordered by
/// increasing aggressiveness.
enum class StyleLevel : std::int8_t {
  Normal3,          // -3
  Normal2,          // -2
  Normal1,          // -1
  NormalEdge,       // 0-, near tie leaning normal
  AggressiveEdge,   // 0+, near tie leaning aggressive
  Aggressive1,      // 1
  Aggressive2,      // 2
  Aggressive3,      // 3
};

inline constexpr std::size_t kStyleLevelCount = 8;

int level_value(StyleLevel level);              // -3..3; both edge levels map to 0
bool is_aggressive(StyleLevel level);           // true for 0+ and above
std::string_view level_name(StyleLevel level);  // "-3".."-1", "0-", "0+", "1".."3"
std::size_t level_index(StyleLevel level);      // position in the ordered scale

/// Distance-gap bins mapping |d_agg - d_norm| to a level magnitude. Each side
/// holds the three finite upper bounds of its bins; the last bin is open
/// ended. Bins are lower-open/upper-closed, except that the normal side's
/// first bin is closed at zero (an exact tie grades as 0-).
struct ThresholdTable {
  std::array<double, 3> aggressive_upper{0.02, 0.2, 0.5};  // -> 0+, 1, 2; above -> 3
  std::array<double, 3> normal_upper{0.02, 0.1, 0.5};      // -> 0-, -1, -2; above -> -3

  static ThresholdTable defaults() { return {}; }
  void validate() const;  // throws std::invalid_argument
};

/// Level for a signed distance gap d_agg - d_norm.
StyleLevel level_for_delta(double delta, const ThresholdTable& thresholds);

/// Per-sample classification outcome.
struct StyleDecision {
  double d_agg = 0.0;   // distance of the aggressive posterior point from the origin
  double d_norm = 0.0;  // same for the normal class
  StyleLevel level = StyleLevel::NormalEdge;
  bool aggressive = false;  // follows the level's sign; 0+ is aggressive, 0- normal
};

struct PosteriorPair {
  double aggressive = 0.5;
  double normal = 0.5;
};

enum class Feature { Speed, Throttle };

/// likelihood * prior / evidence for the two-class case. Falls back to the
/// priors when both likelihoods underflow to zero.
PosteriorPair posterior_from_likelihoods(double like_agg, double like_norm, double prior_agg,
                                         double prior_norm);

struct TrainingOptions {
  BandwidthSpec speed_bandwidth = BandwidthSpec::automatic(kSpeedBandwidthFloor);
  BandwidthSpec throttle_bandwidth = BandwidthSpec::automatic(kThrottleBandwidthFloor);
  ThresholdTable thresholds = ThresholdTable::defaults();
};

/// Two-class per-feature density classifier: one kernel density per class and
/// feature, per-feature posteriors combined through the Euclidean distance of
/// the posterior points, graded by the threshold table.
class ClassifierModel {
 public:
  ClassifierModel() = default;  // untrained

  /// Pools the feature values of all runs per class and fits the four
  /// densities. Requires at least one run of each label; unlabeled runs are
  /// rejected. Class priors are uniform over the two classes.
  static ClassifierModel train(std::span<const DriverRun> runs,
                               const TrainingOptions& options = {});

  bool trained() const { return trained_; }

  /// Per-feature posterior pair for one scalar observation.
  PosteriorPair posterior(Feature feature, double x) const;

  /// (d_agg, d_norm): each class's per-feature posteriors form a point in the
  /// unit square; the score is that point's distance from the origin.
  std::pair<double, double> euclidean_distances(const FeaturePair& x) const;

  StyleDecision decide(const FeaturePair& x) const;

  /// One decision per sample, order preserving. `threads` > 1 splits the run
  /// into contiguous chunks; results are identical to the serial path.
  std::vector<StyleDecision> classify_run(const DriverRun& run, unsigned threads = 1) const;

  void save(const std::filesystem::path& path) const;
  static ClassifierModel load(const std::filesystem::path& path);

  const KdeModel& kde(Label cls, Feature feature) const;
  double prior(Label cls) const;
  const ThresholdTable& thresholds() const { return thresholds_; }

  static constexpr int kFormatVersion = 1;

 private:
  bool trained_ = false;
  KdeModel speed_agg_, speed_norm_, throttle_agg_, throttle_norm_;
  double prior_agg_ = 0.5, prior_norm_ = 0.5;
  ThresholdTable thresholds_;
};

}  // namespace drivestyle
