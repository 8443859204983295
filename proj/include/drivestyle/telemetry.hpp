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

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace drivestyle {

/// Error raised for malformed input files; carries the offending line where known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line = 0)
      : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                    : std::move(message)),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Label { Aggressive, Normal, Unlabeled };

std::string_view label_name(Label label);
Label label_from_name(std::string_view name);  // throws ParseError on unknown names

/// One timestamped observation of the two classification features.
struct TelemetrySample {
  double t = 0.0;         // seconds from run start, strictly increasing within a run
  double speed = 0.0;     // km/h, >= 0
  double throttle = 0.0;  // pedal position as a fraction in [0, 1]
};

/// A contiguous recording from one driver.
struct DriverRun {
  std::string run_id;
  Label label = Label::Unlabeled;
  double sample_rate_hz = 50.0;
  std::vector<TelemetrySample> samples;
};

/// The (speed, throttle) pair fed to the classifiers.
struct FeaturePair {
  double speed = 0.0;
  double throttle = 0.0;
};

// Corpus CSV: header `run_id,label,t,speed,throttle`, one row per sample,
// rows of a run contiguous and time-ordered, numeric fields written with six
// decimal places. Lines starting with '#' are skipped on load.
std::vector<DriverRun> load_corpus(const std::filesystem::path& path);
void save_corpus(std::span<const DriverRun> runs, const std::filesystem::path& path);

/// Order-preserving projection of a run's samples onto the feature pairs.
std::vector<FeaturePair> extract_features(const DriverRun& run);

/// Validates one sample against its invariants; throws std::invalid_argument.
void validate_sample(const TelemetrySample& sample);

}  // namespace drivestyle
