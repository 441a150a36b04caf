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

// Continual data rearrangement.
//
// Turns a standard split (normal-only train, mixed test) into a continual
// benchmark for one camera:
//
//   1. A few test anomalies are drawn (seeded, without replacement) and
//      injected into the training stream at uniformly random positions.
//   2. The remaining test anomalies stay in the test set.
//   3. Test normals are reduced to roughly one per remaining anomaly; the
//      surplus is appended to the training stream in temporal order.
//   4. The stream is cut into k contiguous slices.
//
// The resulting stream mixes normals and a small fraction (< the target
// ratio) of unlabeled anomalies. Some descriptions call the whole stream the
// "continual train normal" set even though it carries those anomalies; here
// it is simply the training stream.

#ifndef UCAL_REARRANGE_HPP
#define UCAL_REARRANGE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ucal/stats.hpp"
#include "ucal/types.hpp"

namespace ucal {

struct RearrangePlan {
  std::uint64_t seed = 0;
  /// Anomalous frames to move into the training stream. When absent the
  /// largest count satisfying the ratio cap and test balance is used.
  std::optional<std::size_t> inject_count;
  /// Strict upper bound on the stream's anomalous fraction.
  double target_train_anomaly_ratio = 0.01;
  std::size_t k = 9;
  /// Allowed |normals - anomalies| / |test|.
  double balance_tolerance = 0.002;

  void validate() const;
};

enum class Origin {
  kOrigTrainNormal,
  kMovedTestNormal,
  kInjectedAnomaly,
  kTestNormal,
  kTestAnomaly,
};

std::string_view to_string(Origin origin);

struct ContinualSplit {
  std::vector<FrameRecord> train_stream;
  std::vector<Origin> train_origin;  // parallel to train_stream
  /// Slice boundaries: slice i is [offsets[i], offsets[i+1]).
  std::vector<std::size_t> slice_offsets;
  CameraDataset test;
  std::vector<Origin> test_origin;  // parallel to test.frames
  double target_train_anomaly_ratio = 0.01;
  double balance_tolerance = 0.002;

  std::size_t slice_count() const {
    return slice_offsets.empty() ? 0 : slice_offsets.size() - 1;
  }
  std::span<const FrameRecord> slice(std::size_t i) const;
  /// 1-based slice number of stream position `pos`.
  std::size_t slice_of(std::size_t pos) const;
};

/// Offsets of a contiguous k-way partition of n items; sizes differ by at
/// most one, earlier slices take the remainder. Throws DataError if n < k or
/// k == 0.
std::vector<std::size_t> slice_offsets(std::size_t n, std::size_t k);

template <typename T>
std::vector<std::span<const T>> slice_stream(std::span<const T> stream,
                                             std::size_t k) {
  const auto offsets = slice_offsets(stream.size(), k);
  std::vector<std::span<const T>> slices;
  slices.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    slices.push_back(stream.subspan(offsets[i], offsets[i + 1] - offsets[i]));
  }
  return slices;
}

/// |normals - anomalies| / (normals + anomalies) <= tolerance.
bool is_balanced(std::size_t normals, std::size_t anomalies, double tolerance);

/// Largest admissible inject count for the given counts, or nullopt.
std::optional<std::size_t> auto_inject_count(std::size_t train_normals,
                                             std::size_t test_normals,
                                             std::size_t test_anomalies,
                                             const RearrangePlan& plan);

/// Throws DataError on any precondition failure.
ContinualSplit rearrange(const SplitSet& split, const RearrangePlan& plan);

struct ContinualStats {
  DatasetStats train;
  DatasetStats test;
};

/// Recomputes statistics and checks every ContinualSplit invariant; throws
/// DataError naming the first violated one.
ContinualStats verify(const ContinualSplit& split);

}  // namespace ucal

#endif  // UCAL_REARRANGE_HPP
