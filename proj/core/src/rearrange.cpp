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

#include "ucal/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "ucal/error.hpp"
#include "ucal/random.hpp"

namespace ucal {
namespace {

struct TestPlan {
  std::size_t kept_normals = 0;
  std::size_t moved_normals = 0;
};

// How many test normals stay for `anomalies` remaining test anomalies.
// All of them stay when already within tolerance; otherwise the test side is
// cut down to exactly one normal per anomaly.
std::optional<TestPlan> plan_test_normals(std::size_t test_normals,
                                          std::size_t anomalies,
                                          double tolerance) {
  if (is_balanced(test_normals, anomalies, tolerance)) {
    return TestPlan{test_normals, 0};
  }
  if (test_normals > anomalies) {
    return TestPlan{anomalies, test_normals - anomalies};
  }
  return std::nullopt;
}

bool under_cap(std::size_t injected, std::size_t stream_size, double ratio) {
  if (stream_size == 0) return false;
  return static_cast<double>(injected) / static_cast<double>(stream_size) < ratio;
}

}  // namespace

void RearrangePlan::validate() const {
  if (k < 1) throw DataError("rearrange plan: k must be at least 1");
  if (!(target_train_anomaly_ratio > 0.0 && target_train_anomaly_ratio < 1.0)) {
    throw DataError("rearrange plan: target_train_anomaly_ratio must be in (0,1)");
  }
  if (!(balance_tolerance >= 0.0 && balance_tolerance < 1.0)) {
    throw DataError("rearrange plan: balance_tolerance must be in [0,1)");
  }
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kOrigTrainNormal: return "orig_train_normal";
    case Origin::kMovedTestNormal: return "moved_test_normal";
    case Origin::kInjectedAnomaly: return "injected_anomaly";
    case Origin::kTestNormal: return "test_normal";
    case Origin::kTestAnomaly: return "test_anomaly";
  }
  return "unknown";
}

std::span<const FrameRecord> ContinualSplit::slice(std::size_t i) const {
  return std::span<const FrameRecord>(train_stream)
      .subspan(slice_offsets.at(i), slice_offsets.at(i + 1) - slice_offsets.at(i));
}

std::size_t ContinualSplit::slice_of(std::size_t pos) const {
  auto it = std::upper_bound(slice_offsets.begin(), slice_offsets.end(), pos);
  return static_cast<std::size_t>(it - slice_offsets.begin());
}

std::vector<std::size_t> slice_offsets(std::size_t n, std::size_t k) {
  if (k == 0) throw DataError("slice count must be at least 1");
  if (n < k) {
    throw DataError(fmt::format("cannot cut {} items into {} slices", n, k));
  }
  std::vector<std::size_t> offsets(k + 1, 0);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  for (std::size_t i = 0; i < k; ++i) {
    offsets[i + 1] = offsets[i] + base + (i < extra ? 1 : 0);
  }
  return offsets;
}

bool is_balanced(std::size_t normals, std::size_t anomalies, double tolerance) {
  const std::size_t total = normals + anomalies;
  if (total == 0) return false;
  const double diff = normals > anomalies ? static_cast<double>(normals - anomalies)
                                          : static_cast<double>(anomalies - normals);
  return diff / static_cast<double>(total) <= tolerance;
}

std::optional<std::size_t> auto_inject_count(std::size_t train_normals,
                                             std::size_t test_normals,
                                             std::size_t test_anomalies,
                                             const RearrangePlan& plan) {
  if (test_anomalies == 0) return std::nullopt;
  // Admissibility is not monotone in the count (the moved-normal volume
  // jumps when the test side crosses the tolerance), so scan downwards.
  for (std::size_t c = test_anomalies - 1;; --c) {
    if (auto tp = plan_test_normals(test_normals, test_anomalies - c,
                                    plan.balance_tolerance)) {
      const std::size_t stream = train_normals + tp->moved_normals + c;
      if (under_cap(c, stream, plan.target_train_anomaly_ratio) &&
          stream >= plan.k) {
        return c;
      }
    }
    if (c == 0) break;
  }
  return std::nullopt;
}

ContinualSplit rearrange(const SplitSet& split, const RearrangePlan& plan) {
  plan.validate();
  validate_standard_split(split);
  const std::string camera =
      split.train.camera_id.empty() ? split.test.camera_id : split.train.camera_id;

  std::vector<const FrameRecord*> test_normals;
  std::vector<const FrameRecord*> test_anomalies;
  for (const FrameRecord& f : split.test.frames) {
    (f.label == Label::kNormal ? test_normals : test_anomalies).push_back(&f);
  }
  if (test_anomalies.empty()) throw DataError("rearrange: test set has no anomalies");

  std::size_t inject = 0;
  if (plan.inject_count) {
    inject = *plan.inject_count;
    if (inject >= test_anomalies.size()) {
      throw DataError(fmt::format(
          "rearrange: inject_count {} leaves no test anomalies (have {})", inject,
          test_anomalies.size()));
    }
  } else {
    auto c = auto_inject_count(split.train.size(), test_normals.size(),
                               test_anomalies.size(), plan);
    if (!c) throw DataError("rearrange: no inject count satisfies the ratio cap and test balance");
    inject = *c;
  }

  const std::size_t remaining = test_anomalies.size() - inject;
  auto test_plan =
      plan_test_normals(test_normals.size(), remaining, plan.balance_tolerance);
  if (!test_plan) {
    throw DataError(fmt::format(
        "rearrange: {} test normals cannot balance {} test anomalies",
        test_normals.size(), remaining));
  }

  Rng rng(plan.seed);
  const auto injected_idx =
      sample_without_replacement(test_anomalies.size(), inject, rng);
  std::vector<std::size_t> kept_normal_idx;
  if (test_plan->moved_normals == 0) {
    kept_normal_idx.resize(test_normals.size());
    for (std::size_t i = 0; i < kept_normal_idx.size(); ++i) kept_normal_idx[i] = i;
  } else {
    kept_normal_idx =
        sample_without_replacement(test_normals.size(), test_plan->kept_normals, rng);
  }

  // Test side.
  std::vector<bool> is_injected(test_anomalies.size(), false);
  for (std::size_t i : injected_idx) is_injected[i] = true;
  std::vector<bool> is_kept(test_normals.size(), false);
  for (std::size_t i : kept_normal_idx) is_kept[i] = true;

  ContinualSplit out;
  out.target_train_anomaly_ratio = plan.target_train_anomaly_ratio;
  out.balance_tolerance = plan.balance_tolerance;
  out.test.camera_id = split.test.camera_id.empty() ? camera : split.test.camera_id;
  // split.test is sorted, so the filtered test side stays sorted.
  {
    std::size_t ni = 0;
    std::size_t ai = 0;
    for (const FrameRecord& f : split.test.frames) {
      if (f.label == Label::kNormal) {
        if (is_kept[ni]) {
          out.test.frames.push_back(f);
          out.test_origin.push_back(Origin::kTestNormal);
        }
        ++ni;
      } else {
        if (!is_injected[ai]) {
          out.test.frames.push_back(f);
          out.test_origin.push_back(Origin::kTestAnomaly);
        }
        ++ai;
      }
    }
  }

  // Base stream: original train normals, then surplus test normals, each in
  // temporal order.
  std::vector<const FrameRecord*> base;
  std::vector<Origin> base_origin;
  base.reserve(split.train.size() + test_plan->moved_normals);
  for (const FrameRecord& f : split.train.frames) {
    base.push_back(&f);
    base_origin.push_back(Origin::kOrigTrainNormal);
  }
  for (std::size_t i = 0; i < test_normals.size(); ++i) {
    if (!is_kept[i]) {
      base.push_back(test_normals[i]);
      base_origin.push_back(Origin::kMovedTestNormal);
    }
  }

  const std::size_t stream_size = base.size() + inject;
  if (!under_cap(inject, stream_size, plan.target_train_anomaly_ratio)) {
    throw DataError(fmt::format(
        "rearrange: {} injected anomalies in a stream of {} breaks the {} cap",
        inject, stream_size, plan.target_train_anomaly_ratio));
  }

  // Injected anomalies take uniformly random stream positions, keeping their
  // own temporal order.
  const auto positions = sample_without_replacement(stream_size, inject, rng);
  out.train_stream.reserve(stream_size);
  out.train_origin.reserve(stream_size);
  std::size_t next_pos = 0;
  std::size_t next_base = 0;
  std::size_t next_inj = 0;
  for (std::size_t pos = 0; pos < stream_size; ++pos) {
    if (next_pos < positions.size() && positions[next_pos] == pos) {
      out.train_stream.push_back(*test_anomalies[injected_idx[next_inj++]]);
      out.train_origin.push_back(Origin::kInjectedAnomaly);
      ++next_pos;
    } else {
      out.train_stream.push_back(*base[next_base]);
      out.train_origin.push_back(base_origin[next_base]);
      ++next_base;
    }
  }

  out.slice_offsets = slice_offsets(out.train_stream.size(), plan.k);
  if (out.test.frames.empty()) throw DataError("rearrange: empty test side");
  return out;
}

ContinualStats verify(const ContinualSplit& split) {
  const auto fail = [](const std::string& what) {
    throw DataError("continual split invariant violated: " + what);
  };
  const auto& stream = split.train_stream;
  if (split.train_origin.size() != stream.size()) fail("train provenance length");
  if (split.test_origin.size() != split.test.frames.size()) fail("test provenance length");

  // Slice partition.
  const auto& off = split.slice_offsets;
  if (off.size() < 2 || off.front() != 0 || off.back() != stream.size()) {
    fail("slices do not partition the training stream");
  }
  for (std::size_t i = 0; i + 1 < off.size(); ++i) {
    if (off[i + 1] <= off[i]) fail("empty or reversed slice");
  }
  const std::size_t largest = off[1] - off[0];
  for (std::size_t i = 0; i + 1 < off.size(); ++i) {
    const std::size_t size = off[i + 1] - off[i];
    if (size > largest || largest - size > 1) fail("slice sizes differ by more than one");
    if (i > 0 && size > off[i] - off[i - 1]) fail("later slice larger than earlier slice");
  }

  // Provenance agrees with labels.
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const bool anomalous = stream[i].label == Label::kAnomalous;
    if (anomalous != (split.train_origin[i] == Origin::kInjectedAnomaly)) {
      fail(fmt::format("provenance of stream frame {}", stream[i].frame_index));
    }
  }
  for (std::size_t i = 0; i < split.test.frames.size(); ++i) {
    const bool anomalous = split.test.frames[i].label == Label::kAnomalous;
    if (anomalous != (split.test_origin[i] == Origin::kTestAnomaly)) {
      fail(fmt::format("provenance of test frame {}", split.test.frames[i].frame_index));
    }
  }

  // Disjointness, and no duplicates within the stream.
  std::unordered_set<FrameIndex> seen;
  seen.reserve(stream.size());
  for (const FrameRecord& f : stream) {
    if (!seen.insert(f.frame_index).second) {
      fail(fmt::format("frame {} appears twice in the training stream", f.frame_index));
    }
  }
  for (const FrameRecord& f : split.test.frames) {
    if (seen.contains(f.frame_index)) {
      fail(fmt::format("frame {} is in both train stream and test (disjointness)",
                       f.frame_index));
    }
  }
  try {
    validate_dataset(split.test);
  } catch (const DataError& e) {
    fail(std::string("test set: ") + e.what());
  }

  const std::string camera = split.test.camera_id;
  ContinualStats stats{compute_stats(stream, camera), compute_stats(split.test)};
  if (!(stats.train.anomaly_fraction < split.target_train_anomaly_ratio)) {
    fail(fmt::format("train anomaly fraction {:.6f} not below {}",
                     stats.train.anomaly_fraction, split.target_train_anomaly_ratio));
  }
  const std::size_t test_anom = stats.test.anomaly_frame_count;
  const std::size_t test_norm = stats.test.frame_count - test_anom;
  if (test_anom == 0 || test_norm == 0) fail("test set lacks one of the labels");
  if (!is_balanced(test_norm, test_anom, split.balance_tolerance)) {
    fail(fmt::format("test balance {}/{} outside tolerance {}", test_norm, test_anom,
                     split.balance_tolerance));
  }
  return stats;
}

}  // namespace ucal
