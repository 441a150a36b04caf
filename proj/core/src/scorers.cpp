// Copyright 2026 The ucal-bench Authors
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

#include "ucal/scorers.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ucal/error.hpp"

namespace ucal {
namespace {

using nlohmann::json;

constexpr std::string_view kCheckpointFormat = "ucal-scorer-checkpoint";
constexpr int kCheckpointVersion = 1;

json envelope(std::string_view type, json state) {
  return json{{"format", kCheckpointFormat},
              {"version", kCheckpointVersion},
              {"type", type},
              {"state", std::move(state)}};
}

template <typename T>
const T& same_type(const Scorer& from, std::string_view expected) {
  const auto* p = dynamic_cast<const T*>(&from);
  if (p == nullptr) {
    throw DataError(fmt::format("cannot restore a {} scorer from a {} snapshot",
                                expected, from.type()));
  }
  return *p;
}

std::vector<double> flatten(const PoseWindow& w) { return w.features; }

}  // namespace

// ---------------------------------------------------------------------------
// GaussianKinematicScorer

GaussianKinematicScorer::FeatureVector GaussianKinematicScorer::features(
    const PoseWindow& window) {
  FeatureVector f{};
  const std::size_t len = window.length;
  if (len == 0 || window.features.size() != len * kPoseFeatures) {
    throw DataError("pose window feature size does not match its length");
  }
  for (std::size_t t = 1; t < len; ++t) {
    const auto prev = window.frame(t - 1);
    const auto cur = window.frame(t);
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      f[k] += std::hypot(cur[2 * k] - prev[2 * k], cur[2 * k + 1] - prev[2 * k + 1]);
    }
  }
  if (len > 1) {
    for (std::size_t k = 0; k < kNumKeypoints; ++k) f[k] /= static_cast<double>(len - 1);
  }
  for (std::size_t t = 0; t < len; ++t) {
    const auto pose = window.frame(t);
    for (std::size_t c = 0; c < kPoseFeatures; ++c) f[kNumKeypoints + c] += pose[c];
  }
  for (std::size_t c = 0; c < kPoseFeatures; ++c) {
    f[kNumKeypoints + c] /= static_cast<double>(len);
  }
  return f;
}

void GaussianKinematicScorer::fit(std::span<const PoseWindow> windows) {
  count_ = 0;
  mean_.fill(0.0);
  m2_.fill(0.0);
  partial_fit(windows);
}

void GaussianKinematicScorer::partial_fit(std::span<const PoseWindow> windows) {
  std::vector<FeatureVector> batch;
  batch.reserve(windows.size());
  for (const PoseWindow& w : windows) batch.push_back(features(w));
  partial_fit_features(batch);
}

void GaussianKinematicScorer::partial_fit_features(
    std::span<const FeatureVector> batch) {
  if (batch.empty()) return;
  // Welford over the batch.
  std::size_t nb = 0;
  FeatureVector mb{};
  FeatureVector m2b{};
  for (const FeatureVector& x : batch) {
    ++nb;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const double delta = x[i] - mb[i];
      mb[i] += delta / static_cast<double>(nb);
      m2b[i] += delta * (x[i] - mb[i]);
    }
  }
  if (count_ == 0) {
    count_ = nb;
    mean_ = mb;
    m2_ = m2b;
    return;
  }
  // Pairwise merge of the running and batch accumulators.
  const double na = static_cast<double>(count_);
  const double nbd = static_cast<double>(nb);
  const double n = na + nbd;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double delta = mb[i] - mean_[i];
    mean_[i] += delta * nbd / n;
    m2_[i] += m2b[i] + delta * delta * na * nbd / n;
  }
  count_ += nb;
}

GaussianKinematicScorer::FeatureVector GaussianKinematicScorer::variance() const {
  FeatureVector v{};
  if (count_ < 2) return v;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    v[i] = std::max(0.0, m2_[i] / static_cast<double>(count_ - 1));
  }
  return v;
}

double GaussianKinematicScorer::score(const PoseWindow& window) const {
  return score_features(features(window));
}

double GaussianKinematicScorer::score_features(const FeatureVector& x) const {
  if (count_ < 2) {
    throw DataError("gaussian scorer needs at least two training windows");
  }
  const FeatureVector var = variance();
  double sum = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double d = x[i] - mean_[i];
    sum += d * d / std::max(var[i], kVarianceFloor);
  }
  return std::sqrt(sum);
}

std::unique_ptr<Scorer> GaussianKinematicScorer::snapshot() const {
  return std::make_unique<GaussianKinematicScorer>(*this);
}

void GaussianKinematicScorer::restore(const Scorer& from) {
  *this = same_type<GaussianKinematicScorer>(from, type());
}

std::string GaussianKinematicScorer::save() const {
  return envelope(type(), json{{"count", count_}, {"mean", mean_}, {"m2", m2_}}).dump();
}

// ---------------------------------------------------------------------------
// KnnScorer

KnnScorer::KnnScorer(std::size_t neighbors, std::size_t capacity,
                     std::uint64_t seed)
    : neighbors_(neighbors), capacity_(capacity), seed_(seed), rng_(seed) {
  if (neighbors_ < 1) throw DataError("knn scorer: neighbor count must be at least 1");
  if (capacity_ < neighbors_) {
    throw DataError("knn scorer: capacity must be at least the neighbor count");
  }
}

void KnnScorer::fit(std::span<const PoseWindow> windows) {
  seen_ = 0;
  stored_.clear();
  rng_ = Rng(seed_);
  partial_fit(windows);
}

void KnnScorer::partial_fit(std::span<const PoseWindow> windows) {
  for (const PoseWindow& w : windows) ingest(flatten(w));
}

void KnnScorer::partial_fit_vectors(std::span<const std::vector<double>> vectors) {
  for (const auto& v : vectors) ingest(v);
}

void KnnScorer::ingest(std::vector<double> v) {
  if (!stored_.empty() && v.size() != stored_.front().size()) {
    throw DataError("knn scorer: window dimension changed between fits");
  }
  ++seen_;
  if (stored_.size() < capacity_) {
    stored_.push_back(std::move(v));
    return;
  }
  const std::uint64_t j = rng_.uniform_index(seen_);
  if (j < capacity_) stored_[j] = std::move(v);
}

double KnnScorer::score(const PoseWindow& window) const {
  return score_vector(window.features);
}

double KnnScorer::score_vector(std::span<const double> query) const {
  if (stored_.size() < neighbors_) {
    throw DataError(fmt::format("knn scorer: {} stored vectors, need {}",
                                stored_.size(), neighbors_));
  }
  std::vector<double> dist;
  dist.reserve(stored_.size());
  for (const auto& s : stored_) {
    if (s.size() != query.size()) throw DataError("knn scorer: query dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = s[i] - query[i];
      sum += d * d;
    }
    dist.push_back(sum);
  }
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(neighbors_);
  std::nth_element(dist.begin(), kth - 1, dist.end());
  std::sort(dist.begin(), kth);
  double total = 0.0;
  for (auto it = dist.begin(); it != kth; ++it) total += std::sqrt(*it);
  return total / static_cast<double>(neighbors_);
}

std::unique_ptr<Scorer> KnnScorer::snapshot() const {
  return std::make_unique<KnnScorer>(*this);
}

void KnnScorer::restore(const Scorer& from) {
  *this = same_type<KnnScorer>(from, type());
}

std::string KnnScorer::save() const {
  return envelope(type(), json{{"neighbors", neighbors_},
                               {"capacity", capacity_},
                               {"seed", seed_},
                               {"seen", seen_},
                               {"rng", rng_.state()},
                               {"stored", stored_}})
      .dump();
}

// ---------------------------------------------------------------------------
// ConstantScorer

std::unique_ptr<Scorer> ConstantScorer::snapshot() const {
  return std::make_unique<ConstantScorer>(*this);
}

void ConstantScorer::restore(const Scorer& from) {
  *this = same_type<ConstantScorer>(from, type());
}

std::string ConstantScorer::save() const {
  return envelope(type(), json{{"value", value_}, {"seen", seen_}}).dump();
}

// ---------------------------------------------------------------------------

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec) {
  if (spec.type == "gaussian") return std::make_unique<GaussianKinematicScorer>();
  if (spec.type == "knn") {
    return std::make_unique<KnnScorer>(spec.knn_neighbors, spec.knn_capacity, spec.seed);
  }
  if (spec.type == "constant") return std::make_unique<ConstantScorer>(spec.constant_value);
  throw DataError(fmt::format("unknown scorer type \"{}\" (gaussian|knn|constant)",
                              spec.type));
}

std::unique_ptr<Scorer> load_checkpoint(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    if (j.at("format").get<std::string>() != kCheckpointFormat) {
      throw DataError("not a scorer checkpoint");
    }
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw DataError(fmt::format("unsupported checkpoint version {}",
                                  j.at("version").get<int>()));
    }
    const std::string type = j.at("type").get<std::string>();
    const json& s = j.at("state");
    if (type == "gaussian") {
      auto scorer = std::make_unique<GaussianKinematicScorer>();
      scorer->count_ = s.at("count").get<std::size_t>();
      scorer->mean_ = s.at("mean").get<GaussianKinematicScorer::FeatureVector>();
      scorer->m2_ = s.at("m2").get<GaussianKinematicScorer::FeatureVector>();
      return scorer;
    }
    if (type == "knn") {
      auto scorer = std::make_unique<KnnScorer>(s.at("neighbors").get<std::size_t>(),
                                                s.at("capacity").get<std::size_t>(),
                                                s.at("seed").get<std::uint64_t>());
      scorer->seen_ = s.at("seen").get<std::size_t>();
      scorer->rng_.set_state(s.at("rng").get<std::string>());
      scorer->stored_ = s.at("stored").get<std::vector<std::vector<double>>>();
      return scorer;
    }
    if (type == "constant") {
      auto scorer = std::make_unique<ConstantScorer>(s.at("value").get<double>());
      scorer->seen_ = s.at("seen").get<std::size_t>();
      return scorer;
    }
    throw DataError(fmt::format("unknown scorer type \"{}\" in checkpoint", type));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed scorer checkpoint: ") + e.what());
  }
}

}  // namespace ucal
