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

#ifndef UCAL_SCORERS_HPP
#define UCAL_SCORERS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucal/preprocess.hpp"
#include "ucal/random.hpp"

namespace ucal {

/// Unsupervised anomaly scorer over pose windows. Labels are never seen.
///
/// Implementations are value-like: snapshot() returns an independent copy
/// whose future behaviour matches the original's from that point on.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::string_view type() const = 0;

  /// Discards all state, then ingests `windows`.
  virtual void fit(std::span<const PoseWindow> windows) = 0;
  /// Ingests `windows` on top of the current state.
  virtual void partial_fit(std::span<const PoseWindow> windows) = 0;
  /// Higher is more anomalous. Deterministic given the state.
  virtual double score(const PoseWindow& window) const = 0;
  /// Number of windows ingested since the last fit().
  virtual std::size_t windows_seen() const = 0;

  virtual std::unique_ptr<Scorer> snapshot() const = 0;
  /// Replaces this state with `from`; throws DataError on a type mismatch.
  virtual void restore(const Scorer& from) = 0;

  /// Versioned JSON checkpoint; see load_checkpoint().
  virtual std::string save() const = 0;
};

/// Diagonal-Gaussian model of simple kinematic window features.
///
/// Features (51): mean frame-to-frame displacement of each joint in
/// normalized coordinates (17), then the mean normalized pose (34). The mean
/// and variance of each feature are tracked with Welford accumulators; a
/// batch is summarized on its own and merged in (Chan et al.), so splitting
/// the data into batches changes results only by rounding.
class GaussianKinematicScorer final : public Scorer {
 public:
  static constexpr std::size_t kFeatureCount = kNumKeypoints + kPoseFeatures;
  static constexpr double kVarianceFloor = 1e-8;

  using FeatureVector = std::array<double, kFeatureCount>;

  static FeatureVector features(const PoseWindow& window);

  std::string_view type() const override { return "gaussian"; }
  void fit(std::span<const PoseWindow> windows) override;
  void partial_fit(std::span<const PoseWindow> windows) override;
  /// Diagonal Mahalanobis distance; throws DataError before two windows.
  double score(const PoseWindow& window) const override;
  double score_features(const FeatureVector& x) const;
  std::size_t windows_seen() const override { return count_; }
  std::unique_ptr<Scorer> snapshot() const override;
  void restore(const Scorer& from) override;
  std::string save() const override;

  const FeatureVector& mean() const { return mean_; }
  /// Unbiased (n - 1) variance per feature.
  FeatureVector variance() const;

  /// Merges pre-computed feature vectors; exposed for exact-value tests.
  void partial_fit_features(std::span<const FeatureVector> batch);

 private:
  friend std::unique_ptr<Scorer> load_checkpoint(std::string_view text);

  std::size_t count_ = 0;
  FeatureVector mean_{};
  FeatureVector m2_{};
};

/// Mean distance to the nearest stored training windows.
///
/// Flattened windows are kept in a reservoir of bounded capacity (Algorithm
/// R, seeded), so memory stays fixed on long streams.
class KnnScorer final : public Scorer {
 public:
  KnnScorer(std::size_t neighbors, std::size_t capacity, std::uint64_t seed);

  std::string_view type() const override { return "knn"; }
  void fit(std::span<const PoseWindow> windows) override;
  void partial_fit(std::span<const PoseWindow> windows) override;
  double score(const PoseWindow& window) const override;
  double score_vector(std::span<const double> query) const;
  std::size_t windows_seen() const override { return seen_; }
  std::unique_ptr<Scorer> snapshot() const override;
  void restore(const Scorer& from) override;
  std::string save() const override;

  void partial_fit_vectors(std::span<const std::vector<double>> vectors);

  std::size_t neighbors() const { return neighbors_; }
  std::size_t capacity() const { return capacity_; }
  const std::vector<std::vector<double>>& stored() const { return stored_; }

 private:
  friend std::unique_ptr<Scorer> load_checkpoint(std::string_view text);

  void ingest(std::vector<double> v);

  std::size_t neighbors_;
  std::size_t capacity_;
  std::uint64_t seed_;
  std::size_t seen_ = 0;
  Rng rng_;
  std::vector<std::vector<double>> stored_;
};

/// Scores every window with the same value. A reference point for the
/// metrics: any constant scorer yields AUC-ROC 0.5 and EER 0.5.
class ConstantScorer final : public Scorer {
 public:
  explicit ConstantScorer(double value = 0.0) : value_(value) {}

  std::string_view type() const override { return "constant"; }
  void fit(std::span<const PoseWindow> windows) override { seen_ = windows.size(); }
  void partial_fit(std::span<const PoseWindow> windows) override { seen_ += windows.size(); }
  double score(const PoseWindow&) const override { return value_; }
  std::size_t windows_seen() const override { return seen_; }
  std::unique_ptr<Scorer> snapshot() const override;
  void restore(const Scorer& from) override;
  std::string save() const override;

 private:
  friend std::unique_ptr<Scorer> load_checkpoint(std::string_view text);

  double value_;
  std::size_t seen_ = 0;
};

struct ScorerSpec {
  std::string type = "gaussian";  // gaussian | knn | constant
  std::size_t knn_neighbors = 5;
  std::size_t knn_capacity = 50000;
  std::uint64_t seed = 0;
  double constant_value = 0.0;
};

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec);

/// Rebuilds a scorer from Scorer::save() output.
std::unique_ptr<Scorer> load_checkpoint(std::string_view text);

}  // namespace ucal

#endif  // UCAL_SCORERS_HPP
