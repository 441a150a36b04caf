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

// Independent reference implementations and random-input generators shared
// by the unit tests and the acceptance runner. Everything here is written
// the slow, obvious way on purpose.

#ifndef UCAL_TESTS_ORACLES_HPP
#define UCAL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ucal/metrics.hpp"
#include "ucal/random.hpp"
#include "ucal/types.hpp"

namespace ucal::oracle {

// ---------------------------------------------------------------------------
// Metrics by exhaustive threshold enumeration.

struct OperatingPoint {
  std::size_t tp = 0;
  std::size_t fp = 0;
  double fpr = 0.0;
  double fnr = 0.0;
};

// Flag rule: score >= t. One point per distinct score plus "flag nothing".
inline std::vector<OperatingPoint> operating_points(const ScoreSeries& s) {
  std::set<double> thresholds;
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (const auto& e : s.entries) {
    thresholds.insert(e.score);
    (e.label == Label::kAnomalous ? pos : neg)++;
  }
  thresholds.insert(std::numeric_limits<double>::infinity());
  std::vector<OperatingPoint> points;
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    OperatingPoint p;
    for (const auto& e : s.entries) {
      if (e.score >= *it) (e.label == Label::kAnomalous ? p.tp : p.fp)++;
    }
    p.fpr = neg == 0 ? 0.0 : static_cast<double>(p.fp) / static_cast<double>(neg);
    p.fnr = pos == 0 ? 0.0 : 1.0 - static_cast<double>(p.tp) / static_cast<double>(pos);
    points.push_back(p);
  }
  return points;  // most to least strict
}

// Pairwise Mann-Whitney count; ties count one half.
inline double auc_roc(const ScoreSeries& s) {
  double wins = 0.0;
  double pairs = 0.0;
  for (const auto& a : s.entries) {
    if (a.label != Label::kAnomalous) continue;
    for (const auto& n : s.entries) {
      if (n.label != Label::kNormal) continue;
      pairs += 1.0;
      if (a.score > n.score) wins += 1.0;
      if (a.score == n.score) wins += 0.5;
    }
  }
  return wins / pairs;
}

inline double auc_pr(const ScoreSeries& s) {
  std::size_t pos = 0;
  for (const auto& e : s.entries) pos += e.label == Label::kAnomalous;
  double ap = 0.0;
  double prev_recall = 0.0;
  for (const OperatingPoint& p : operating_points(s)) {
    if (p.tp + p.fp == 0) continue;
    const double recall = static_cast<double>(p.tp) / static_cast<double>(pos);
    const double precision = static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

inline double eer(const ScoreSeries& s) {
  double best_gap = std::numeric_limits<double>::infinity();
  double best = 1.0;
  for (const OperatingPoint& p : operating_points(s)) {
    const double gap = std::abs(p.fpr - p.fnr);
    const double mid = 0.5 * (p.fpr + p.fnr);
    if (gap < best_gap - 1e-12) {
      best_gap = gap;
      best = mid;
    } else if (std::abs(gap - best_gap) <= 1e-12) {
      best = std::min(best, mid);
    }
  }
  return best;
}

inline double fpr_at_fnr(const ScoreSeries& s, double target) {
  double best = 1.0;
  for (const OperatingPoint& p : operating_points(s)) {
    if (p.fnr <= target + 1e-12) best = std::min(best, p.fpr);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random inputs.

// n entries (n >= 2) drawn from `levels` distinct score values so ties are
// common; both labels always present.
inline ScoreSeries random_series(Rng& rng, std::size_t n, std::size_t levels) {
  ScoreSeries s;
  for (std::size_t i = 0; i < n; ++i) {
    const double score = static_cast<double>(rng.uniform_index(levels)) * 0.125 - 1.0;
    const Label label = rng.uniform_index(2) == 0 ? Label::kNormal : Label::kAnomalous;
    s.entries.push_back({static_cast<FrameIndex>(i), score, label});
  }
  s.entries[0].label = Label::kNormal;
  s.entries[1].label = Label::kAnomalous;
  return s;
}

inline PersonObservation random_person(Rng& rng, TrackId id) {
  PersonObservation p;
  p.track_id = id;
  const double x1 = rng.uniform(0.0, 1800.0);
  const double y1 = rng.uniform(0.0, 900.0);
  p.bbox = {x1, y1, x1 + rng.uniform(5.0, 120.0), y1 + rng.uniform(10.0, 180.0)};
  p.interpolated = rng.uniform_index(5) == 0;
  for (Keypoint& k : p.keypoints) {
    k.x = rng.uniform(p.bbox.x1, p.bbox.x2);
    k.y = rng.uniform(p.bbox.y1, p.bbox.y2);
    if (!p.interpolated) k.visibility = rng.uniform01();
  }
  return p;
}

inline FrameRecord random_frame(Rng& rng, const std::string& camera, FrameIndex index,
                                std::size_t max_persons = 4) {
  FrameRecord f;
  f.camera_id = camera;
  f.frame_index = index;
  f.label = rng.uniform_index(3) == 0 ? Label::kAnomalous : Label::kNormal;
  const std::size_t persons = rng.uniform_index(max_persons + 1);
  for (std::size_t p = 0; p < persons; ++p) f.persons.push_back(random_person(rng, p * 7 + 3));
  if (f.label == Label::kAnomalous && rng.uniform_index(2) == 0) {
    f.anomaly_regions.push_back({1.0, 2.0, 30.5, 40.25});
  }
  return f;
}

// Frames with strictly increasing, randomly spaced indices.
inline CameraDataset random_dataset(Rng& rng, std::size_t n, const std::string& camera = "CAM",
                                    std::size_t max_persons = 4) {
  CameraDataset d;
  d.camera_id = camera;
  FrameIndex index = rng.uniform_index(5);
  for (std::size_t i = 0; i < n; ++i) {
    d.frames.push_back(random_frame(rng, camera, index, max_persons));
    index += 1 + rng.uniform_index(3);
  }
  return d;
}

// A standard split whose counts admit a continual rearrangement: train is
// all normal and precedes the test block in time.
inline SplitSet random_split(Rng& rng) {
  const std::size_t anomalies = 10 + rng.uniform_index(50);
  const std::size_t test_normals = anomalies + rng.uniform_index(2 * anomalies);
  const std::size_t train = 2000 + rng.uniform_index(6000);
  SplitSet s;
  s.train.camera_id = s.test.camera_id = "RND";
  FrameIndex index = 0;
  for (std::size_t i = 0; i < train; ++i) {
    FrameRecord f;
    f.camera_id = "RND";
    f.frame_index = index++;
    s.train.frames.push_back(std::move(f));
  }
  std::vector<Label> labels(test_normals, Label::kNormal);
  labels.resize(test_normals + anomalies, Label::kAnomalous);
  for (std::size_t i = labels.size(); i > 1; --i) {
    std::swap(labels[i - 1], labels[rng.uniform_index(i)]);
  }
  for (Label l : labels) {
    FrameRecord f;
    f.camera_id = "RND";
    f.frame_index = index++;
    f.label = l;
    s.test.frames.push_back(std::move(f));
  }
  return s;
}

// Split sized after the published C0 continual characteristics: 509,313
// normal frames in total, of which 26,093 end up in the balanced test set,
// and 30,667 anomalous test frames. Persons are omitted; only counts matter.
inline SplitSet c0_split() {
  constexpr std::size_t kTrainNormals = 509313 - 26093;
  constexpr std::size_t kTestNormals = 26093;
  constexpr std::size_t kTestAnomalies = 30667;
  SplitSet s;
  s.train.camera_id = s.test.camera_id = "C0";
  s.train.frames.resize(kTrainNormals);
  for (std::size_t i = 0; i < kTrainNormals; ++i) {
    s.train.frames[i].camera_id = "C0";
    s.train.frames[i].frame_index = i;
  }
  s.test.frames.resize(kTestNormals + kTestAnomalies);
  for (std::size_t i = 0; i < s.test.frames.size(); ++i) {
    FrameRecord& f = s.test.frames[i];
    f.camera_id = "C0";
    f.frame_index = kTrainNormals + i;
    // Anomalies spread evenly over the test period, exactly kTestAnomalies.
    const std::size_t n = s.test.frames.size();
    f.label = (i + 1) * kTestAnomalies / n > i * kTestAnomalies / n ? Label::kAnomalous
                                                                   : Label::kNormal;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Field-by-field structural comparison, written independently of operator==.

inline bool same_frame(const FrameRecord& a, const FrameRecord& b) {
  if (a.camera_id != b.camera_id || a.frame_index != b.frame_index || a.label != b.label ||
      a.persons.size() != b.persons.size() ||
      a.anomaly_regions.size() != b.anomaly_regions.size()) {
    return false;
  }
  const auto same_box = [](const BoundingBox& x, const BoundingBox& y) {
    return x.x1 == y.x1 && x.y1 == y.y1 && x.x2 == y.x2 && x.y2 == y.y2;
  };
  for (std::size_t r = 0; r < a.anomaly_regions.size(); ++r) {
    if (!same_box(a.anomaly_regions[r], b.anomaly_regions[r])) return false;
  }
  for (std::size_t p = 0; p < a.persons.size(); ++p) {
    const PersonObservation& x = a.persons[p];
    const PersonObservation& y = b.persons[p];
    if (x.track_id != y.track_id || x.interpolated != y.interpolated || !same_box(x.bbox, y.bbox)) {
      return false;
    }
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      const Keypoint& u = x.keypoints[k];
      const Keypoint& v = y.keypoints[k];
      if (u.x != v.x || u.y != v.y || u.visibility.has_value() != v.visibility.has_value()) {
        return false;
      }
      if (u.visibility && *u.visibility != *v.visibility) return false;
    }
  }
  return true;
}

}  // namespace ucal::oracle

#endif  // UCAL_TESTS_ORACLES_HPP
