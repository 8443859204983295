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

#include "drivestyle/bayes.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace drivestyle {

using nlohmann::json;

int level_value(StyleLevel level) {
  switch (level) {
    case StyleLevel::Normal3: return -3;
    case StyleLevel::Normal2: return -2;
    case StyleLevel::Normal1: return -1;
    case StyleLevel::NormalEdge: return 0;
    case StyleLevel::AggressiveEdge: return 0;
    case StyleLevel::Aggressive1: return 1;
    case StyleLevel::Aggressive2: return 2;
    case StyleLevel::Aggressive3: return 3;
  }
  return 0;
}

bool is_aggressive(StyleLevel level) { return level >= StyleLevel::AggressiveEdge; }

std::string_view level_name(StyleLevel level) {
  switch (level) {
    case StyleLevel::Normal3: return "-3";
    case StyleLevel::Normal2: return "-2";
    case StyleLevel::Normal1: return "-1";
    case StyleLevel::NormalEdge: return "0-";
    case StyleLevel::AggressiveEdge: return "0+";
    case StyleLevel::Aggressive1: return "1";
    case StyleLevel::Aggressive2: return "2";
    case StyleLevel::Aggressive3: return "3";
  }
  return "0-";
}

std::size_t level_index(StyleLevel level) { return static_cast<std::size_t>(level); }

void ThresholdTable::validate() const {
  for (const auto& side : {aggressive_upper, normal_upper}) {
    double prev = 0.0;
    for (const double bound : side) {
      if (!std::isfinite(bound) || bound <= prev) {
        throw std::invalid_argument(
            "threshold bounds must be finite, positive, and strictly increasing");
      }
      prev = bound;
    }
  }
}

StyleLevel level_for_delta(double delta, const ThresholdTable& t) {
  if (std::isnan(delta)) {
    throw std::invalid_argument("distance gap must not be NaN");
  }
  if (delta > 0.0) {
    if (delta <= t.aggressive_upper[0]) return StyleLevel::AggressiveEdge;
    if (delta <= t.aggressive_upper[1]) return StyleLevel::Aggressive1;
    if (delta <= t.aggressive_upper[2]) return StyleLevel::Aggressive2;
    return StyleLevel::Aggressive3;
  }
  const double gap = -delta;
  if (gap <= t.normal_upper[0]) return StyleLevel::NormalEdge;
  if (gap <= t.normal_upper[1]) return StyleLevel::Normal1;
  if (gap <= t.normal_upper[2]) return StyleLevel::Normal2;
  return StyleLevel::Normal3;
}

PosteriorPair posterior_from_likelihoods(double like_agg, double like_norm, double prior_agg,
                                         double prior_norm) {
  const double weighted_agg = like_agg * prior_agg;
  const double weighted_norm = like_norm * prior_norm;
  const double evidence = weighted_agg + weighted_norm;
  if (evidence <= 0.0) {
    // Both class densities underflowed: the observation carries no usable
    // information, so report the priors.
    return {prior_agg, prior_norm};
  }
  return {weighted_agg / evidence, weighted_norm / evidence};
}

ClassifierModel ClassifierModel::train(std::span<const DriverRun> runs,
                                       const TrainingOptions& options) {
  options.thresholds.validate();

  std::vector<double> speed_agg, speed_norm, throttle_agg, throttle_norm;
  for (const DriverRun& run : runs) {
    if (run.label == Label::Unlabeled) {
      throw std::invalid_argument("training requires labeled runs; run '" + run.run_id +
                                  "' is unlabeled");
    }
    if (run.samples.empty()) {
      throw std::invalid_argument("training run '" + run.run_id + "' is empty");
    }
    auto& speeds = run.label == Label::Aggressive ? speed_agg : speed_norm;
    auto& throttles = run.label == Label::Aggressive ? throttle_agg : throttle_norm;
    for (const TelemetrySample& s : run.samples) {
      speeds.push_back(s.speed);
      throttles.push_back(s.throttle);
    }
  }
  if (speed_agg.empty() || speed_norm.empty()) {
    throw std::invalid_argument("training requires at least one run of each class");
  }

  ClassifierModel model;
  model.speed_agg_ = KdeModel::fit(speed_agg, options.speed_bandwidth);
  model.speed_norm_ = KdeModel::fit(speed_norm, options.speed_bandwidth);
  model.throttle_agg_ = KdeModel::fit(throttle_agg, options.throttle_bandwidth);
  model.throttle_norm_ = KdeModel::fit(throttle_norm, options.throttle_bandwidth);
  model.prior_agg_ = 0.5;  // uniform over the two classes
  model.prior_norm_ = 0.5;
  model.thresholds_ = options.thresholds;
  model.trained_ = true;
  return model;
}

const KdeModel& ClassifierModel::kde(Label cls, Feature feature) const {
  if (cls == Label::Aggressive) {
    return feature == Feature::Speed ? speed_agg_ : throttle_agg_;
  }
  if (cls == Label::Normal) {
    return feature == Feature::Speed ? speed_norm_ : throttle_norm_;
  }
  throw std::invalid_argument("no density for the unlabeled class");
}

double ClassifierModel::prior(Label cls) const {
  if (cls == Label::Aggressive) return prior_agg_;
  if (cls == Label::Normal) return prior_norm_;
  throw std::invalid_argument("no prior for the unlabeled class");
}

PosteriorPair ClassifierModel::posterior(Feature feature, double x) const {
  if (!trained_) {
    throw std::logic_error("classifier model is not trained");
  }
  const KdeModel& agg = feature == Feature::Speed ? speed_agg_ : throttle_agg_;
  const KdeModel& norm = feature == Feature::Speed ? speed_norm_ : throttle_norm_;
  return posterior_from_likelihoods(agg.density_at(x), norm.density_at(x), prior_agg_,
                                    prior_norm_);
}

std::pair<double, double> ClassifierModel::euclidean_distances(const FeaturePair& x) const {
  const PosteriorPair speed = posterior(Feature::Speed, x.speed);
  const PosteriorPair throttle = posterior(Feature::Throttle, x.throttle);
  const double d_agg =
      std::sqrt(speed.aggressive * speed.aggressive + throttle.aggressive * throttle.aggressive);
  const double d_norm =
      std::sqrt(speed.normal * speed.normal + throttle.normal * throttle.normal);
  return {d_agg, d_norm};
}

StyleDecision ClassifierModel::decide(const FeaturePair& x) const {
  const auto [d_agg, d_norm] = euclidean_distances(x);
  const StyleLevel level = level_for_delta(d_agg - d_norm, thresholds_);
  return {d_agg, d_norm, level, is_aggressive(level)};
}

std::vector<StyleDecision> ClassifierModel::classify_run(const DriverRun& run,
                                                         unsigned threads) const {
  if (!trained_) {
    throw std::logic_error("classifier model is not trained");
  }
  if (run.samples.empty()) {
    throw std::invalid_argument("cannot classify an empty run");
  }
  const std::size_t n = run.samples.size();
  std::vector<StyleDecision> decisions(n);

  const auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      decisions[i] = decide({run.samples[i].speed, run.samples[i].throttle});
    }
  };

  if (threads <= 1 || n < 256) {
    worker(0, n);
    return decisions;
  }

  const std::size_t used = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(used);
  const std::size_t chunk = (n + used - 1) / used;
  for (std::size_t t = 0; t < used; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (std::thread& th : pool) th.join();
  return decisions;
}

namespace {

json kde_to_json(const KdeModel& model) {
  return json{{"points", std::vector<double>(model.points().begin(), model.points().end())},
              {"bandwidth", model.bandwidth()}};
}

KdeModel kde_from_json(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("bandwidth")) {
    throw ParseError("model file: malformed density block");
  }
  return KdeModel(j.at("points").get<std::vector<double>>(), j.at("bandwidth").get<double>());
}

}  // namespace

void ClassifierModel::save(const std::filesystem::path& path) const {
  if (!trained_) {
    throw std::logic_error("refusing to save an untrained classifier model");
  }
  json doc{
      {"format_version", kFormatVersion},
      {"priors", {{"aggressive", prior_agg_}, {"normal", prior_norm_}}},
      {"thresholds",
       {{"aggressive_upper", thresholds_.aggressive_upper},
        {"normal_upper", thresholds_.normal_upper}}},
      {"kde",
       {{"aggressive",
         {{"speed", kde_to_json(speed_agg_)}, {"throttle", kde_to_json(throttle_agg_)}}},
        {"normal",
         {{"speed", kde_to_json(speed_norm_)}, {"throttle", kde_to_json(throttle_norm_)}}}}},
  };
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write model file: " + path.string());
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("write failed for model file: " + path.string());
  }
}

ClassifierModel ClassifierModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open model file: " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("model file '" + path.string() + "': " + e.what());
  }

  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw ParseError("model file format version " + std::to_string(version) +
                       " is not supported (expected " + std::to_string(kFormatVersion) + ")");
    }
    ClassifierModel model;
    model.prior_agg_ = doc.at("priors").at("aggressive").get<double>();
    model.prior_norm_ = doc.at("priors").at("normal").get<double>();
    if (!(model.prior_agg_ > 0.0) || !(model.prior_norm_ > 0.0) ||
        std::abs(model.prior_agg_ + model.prior_norm_ - 1.0) > 1e-12) {
      throw ParseError("model file: priors must be positive and sum to 1");
    }
    const json& t = doc.at("thresholds");
    std::copy_n(t.at("aggressive_upper").get<std::vector<double>>().begin(), 3,
                model.thresholds_.aggressive_upper.begin());
    std::copy_n(t.at("normal_upper").get<std::vector<double>>().begin(), 3,
                model.thresholds_.normal_upper.begin());
    model.thresholds_.validate();
    const json& kdes = doc.at("kde");
    model.speed_agg_ = kde_from_json(kdes.at("aggressive").at("speed"));
    model.throttle_agg_ = kde_from_json(kdes.at("aggressive").at("throttle"));
    model.speed_norm_ = kde_from_json(kdes.at("normal").at("speed"));
    model.throttle_norm_ = kde_from_json(kdes.at("normal").at("throttle"));
    model.trained_ = true;
    return model;
  } catch (const json::exception& e) {
    throw ParseError("model file '" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError("model file '" + path.string() + "': " + e.what());
  }
}

}  // namespace drivestyle
