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

#include "drivestyle/telemetry.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

namespace drivestyle {

namespace {

constexpr std::string_view kHeader = "run_id,label,t,speed,throttle";

double parse_double(std::string_view field, std::string_view what, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("invalid " + std::string(what) + " value '" + std::string(field) + "'",
                     line);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite " + std::string(what) + " value", line);
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(row.substr(start));
      return fields;
    }
    fields.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string_view label_name(Label label) {
  switch (label) {
    case Label::Aggressive: return "aggressive";
    case Label::Normal: return "normal";
    case Label::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label label_from_name(std::string_view name) {
  if (name == "aggressive") return Label::Aggressive;
  if (name == "normal") return Label::Normal;
  if (name == "unlabeled") return Label::Unlabeled;
  throw ParseError("unknown label '" + std::string(name) + "'");
}

void validate_sample(const TelemetrySample& sample) {
  if (!std::isfinite(sample.t) || sample.t < 0.0) {
    throw std::invalid_argument("sample timestamp must be finite and non-negative");
  }
  if (!std::isfinite(sample.speed) || sample.speed < 0.0) {
    throw std::invalid_argument("speed must be finite and non-negative");
  }
  if (!std::isfinite(sample.throttle) || sample.throttle < 0.0 || sample.throttle > 1.0) {
    throw std::invalid_argument("throttle must lie in [0, 1]");
  }
}

std::vector<DriverRun> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus file: " + path.string());
  }

  std::vector<DriverRun> runs;
  std::unordered_set<std::string> closed_runs;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    if (!saw_header) {
      if (line != kHeader) {
        throw ParseError("corpus header must be '" + std::string(kHeader) + "'", line_no);
      }
      saw_header = true;
      continue;
    }

    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw ParseError("expected 5 comma-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }

    const std::string run_id(fields[0]);
    if (run_id.empty()) {
      throw ParseError("empty run_id", line_no);
    }
    Label label;
    try {
      label = label_from_name(fields[1]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }

    TelemetrySample sample;
    sample.t = parse_double(fields[2], "t", line_no);
    sample.speed = parse_double(fields[3], "speed", line_no);
    sample.throttle = parse_double(fields[4], "throttle", line_no);
    try {
      validate_sample(sample);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }

    if (runs.empty() || runs.back().run_id != run_id) {
      if (closed_runs.count(run_id) > 0) {
        throw ParseError("rows for run '" + run_id + "' are not contiguous", line_no);
      }
      if (!runs.empty()) closed_runs.insert(runs.back().run_id);
      DriverRun run;
      run.run_id = run_id;
      run.label = label;
      runs.push_back(std::move(run));
    } else {
      DriverRun& run = runs.back();
      if (run.label != label) {
        throw ParseError("label changes within run '" + run_id + "'", line_no);
      }
      if (sample.t <= run.samples.back().t) {
        throw ParseError("timestamps must strictly increase within run '" + run_id + "'",
                         line_no);
      }
    }
    runs.back().samples.push_back(sample);
  }

  if (!saw_header) {
    throw ParseError("corpus file has no header row");
  }

  // The CSV carries no explicit rate; recover it from the time axis.
  for (DriverRun& run : runs) {
    const auto& s = run.samples;
    if (s.size() >= 2 && s.back().t > s.front().t) {
      run.sample_rate_hz =
          static_cast<double>(s.size() - 1) / (s.back().t - s.front().t);
    }
  }
  return runs;
}

void save_corpus(std::span<const DriverRun> runs, const std::filesystem::path& path) {
  for (const DriverRun& run : runs) {
    double prev_t = -1.0;
    for (const TelemetrySample& sample : run.samples) {
      validate_sample(sample);
      if (sample.t <= prev_t) {
        throw std::invalid_argument("timestamps must strictly increase within run '" +
                                    run.run_id + "'");
      }
      prev_t = sample.t;
    }
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write corpus file: " + path.string());
  }
  out << kHeader << '\n';
  char row[192];
  for (const DriverRun& run : runs) {
    for (const TelemetrySample& sample : run.samples) {
      std::snprintf(row, sizeof(row), "%s,%s,%.6f,%.6f,%.6f", run.run_id.c_str(),
                    std::string(label_name(run.label)).c_str(), sample.t, sample.speed,
                    sample.throttle);
      out << row << '\n';
    }
  }
  if (!out) {
    throw IoError("write failed for corpus file: " + path.string());
  }
}

std::vector<FeaturePair> extract_features(const DriverRun& run) {
  if (run.samples.empty()) {
    throw std::invalid_argument("cannot extract features from an empty run");
  }
  std::vector<FeaturePair> features;
  features.reserve(run.samples.size());
  for (const TelemetrySample& sample : run.samples) {
    features.push_back({sample.speed, sample.throttle});
  }
  return features;
}

}  // namespace drivestyle
