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

#include "ucal/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ucal/error.hpp"
#include "ucal/random.hpp"

namespace ucal {
namespace {

constexpr double kCanvasWidth = 1920.0;
constexpr double kCanvasHeight = 1080.0;
constexpr double kTemplateHeight = 145.0;
constexpr double kBoxMargin = 8.0;
constexpr TrackId kActorTrackBase = 1000;

// COCO17 joint offsets from the body center, for a person of
// kTemplateHeight pixels facing the camera.
constexpr std::array<std::array<double, 2>, kNumKeypoints> kTemplate = {{
    {0, -70},   {-4, -74},  {4, -74},   {-9, -72}, {9, -72},  // head
    {-20, -50}, {20, -50},                                    // shoulders
    {-26, -25}, {26, -25},                                    // elbows
    {-28, 0},   {28, 0},                                      // wrists
    {-12, 5},   {12, 5},                                      // hips
    {-13, 40},  {13, 40},                                     // knees
    {-14, 75},  {14, 75},                                     // ankles
}};

enum Joint : std::size_t {
  kLeftElbow = 7, kRightElbow = 8, kLeftWrist = 9, kRightWrist = 10,
  kLeftHip = 11, kRightHip = 12, kLeftKnee = 13, kRightKnee = 14,
  kLeftAnkle = 15, kRightAnkle = 16,
};

// One simulated person walking around the canvas.
class Walker {
 public:
  Walker(TrackId id, MotionStyle style, Rng& rng) : id_(id), style_(style) {
    const double margin = style_.body_height;
    cx_ = rng.uniform(margin, kCanvasWidth - margin);
    cy_ = rng.uniform(margin, kCanvasHeight - margin);
    heading_ = rng.uniform(0.0, 2.0 * std::numbers::pi);
    phase_ = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  void set_frozen(bool frozen) { frozen_ = frozen; }
  void set_collapse(double collapse) { collapse_ = collapse; }

  PersonObservation step(Rng& rng) {
    if (!frozen_ || !have_pose_) {
      advance(rng);
      pose_ = pose(rng);
      have_pose_ = true;
    }
    return pose_;
  }

 private:
  void advance(Rng& rng) {
    heading_ += 0.05 * rng.normal();
    const double margin = style_.body_height;
    double nx = cx_ + style_.speed * std::cos(heading_);
    double ny = cy_ + style_.speed * std::sin(heading_);
    if (nx < margin || nx > kCanvasWidth - margin) {
      heading_ = std::numbers::pi - heading_;
      nx = std::clamp(nx, margin, kCanvasWidth - margin);
    }
    if (ny < margin || ny > kCanvasHeight - margin) {
      heading_ = -heading_;
      ny = std::clamp(ny, margin, kCanvasHeight - margin);
    }
    cx_ = nx;
    cy_ = ny;
    phase_ += style_.swing_rate;
  }

  PersonObservation pose(Rng& rng) const {
    const double scale = style_.body_height / kTemplateHeight;
    const double swing = style_.swing_amplitude * std::sin(phase_);
    const double hip_x = 0.5 * (kTemplate[kLeftHip][0] + kTemplate[kRightHip][0]);
    const double hip_y = 0.5 * (kTemplate[kLeftHip][1] + kTemplate[kRightHip][1]);

    PersonObservation obs;
    obs.track_id = id_;
    double min_x = kCanvasWidth, min_y = kCanvasHeight, max_x = 0.0, max_y = 0.0;
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      double ox = kTemplate[k][0];
      double oy = kTemplate[k][1];
      switch (k) {
        case kLeftElbow: ox += 0.5 * swing; oy -= 0.6 * style_.arm_raise; break;
        case kRightElbow: ox -= 0.5 * swing; oy -= 0.6 * style_.arm_raise; break;
        case kLeftWrist: ox += swing; oy -= style_.arm_raise; break;
        case kRightWrist: ox -= swing; oy -= style_.arm_raise; break;
        case kLeftKnee: ox -= 0.5 * swing; break;
        case kRightKnee: ox += 0.5 * swing; break;
        case kLeftAnkle: ox -= swing; break;
        case kRightAnkle: ox += swing; break;
        default: break;
      }
      const bool limb = k >= kLeftElbow && k != kLeftHip && k != kRightHip;
      if (limb && collapse_ > 0.0) {
        ox += collapse_ * (hip_x - ox);
        oy += collapse_ * (hip_y - oy);
      }
      const double noise = frozen_ ? 0.0 : style_.jitter;
      Keypoint& kp = obs.keypoints[k];
      kp.x = cx_ + scale * ox + noise * rng.normal();
      kp.y = cy_ + scale * oy + noise * rng.normal();
      kp.visibility = rng.uniform(0.5, 1.0);
      min_x = std::min(min_x, kp.x);
      min_y = std::min(min_y, kp.y);
      max_x = std::max(max_x, kp.x);
      max_y = std::max(max_y, kp.y);
    }
    obs.bbox = {std::max(0.0, min_x - kBoxMargin), std::max(0.0, min_y - kBoxMargin),
                max_x + kBoxMargin, max_y + kBoxMargin};
    return obs;
  }

  TrackId id_;
  MotionStyle style_;
  double cx_ = 0.0;
  double cy_ = 0.0;
  double heading_ = 0.0;
  double phase_ = 0.0;
  bool frozen_ = false;
  double collapse_ = 0.0;
  bool have_pose_ = false;
  PersonObservation pose_;
};

MotionStyle actor_style(const SyntheticSpec& spec, AnomalyKind kind) {
  MotionStyle s = spec.style;
  if (kind == AnomalyKind::kVelocitySpike) {
    s.speed *= spec.anomaly_speed_factor;
    s.swing_amplitude *= spec.anomaly_speed_factor;
    s.swing_rate *= 1.5;
  }
  return s;
}

// Sizes of `parts` near-equal pieces of n (earlier pieces take the remainder).
std::vector<std::size_t> split_evenly(std::size_t n, std::size_t parts) {
  std::vector<std::size_t> sizes(parts, parts == 0 ? 0 : n / parts);
  for (std::size_t i = 0; i < (parts == 0 ? 0 : n % parts); ++i) ++sizes[i];
  return sizes;
}

}  // namespace

std::string_view to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::kVelocitySpike: return "velocity_spike";
    case AnomalyKind::kFrozenPose: return "frozen_pose";
    case AnomalyKind::kLimbCollapse: return "limb_collapse";
  }
  return "unknown";
}

AnomalyKind parse_anomaly_kind(std::string_view text) {
  if (text == "velocity_spike") return AnomalyKind::kVelocitySpike;
  if (text == "frozen_pose") return AnomalyKind::kFrozenPose;
  if (text == "limb_collapse") return AnomalyKind::kLimbCollapse;
  throw DataError(fmt::format(
      "unknown anomaly kind \"{}\" (velocity_spike|frozen_pose|limb_collapse)", text));
}

SplitSet generate_synthetic(const SyntheticSpec& spec) {
  if (spec.normal_frames == 0) throw DataError("synthetic: at least one normal frame required");
  if (spec.anomalous_frames > 0 && spec.kinds.empty()) {
    throw DataError("synthetic: no anomaly kinds given");
  }
  if (!(spec.test_normal_share >= 0.0 && spec.test_normal_share < 1.0)) {
    throw DataError("synthetic: test_normal_share must be in [0,1)");
  }
  if (spec.event_length == 0) throw DataError("synthetic: event_length must be positive");

  const double ratio = spec.test_normal_share / (1.0 - spec.test_normal_share);
  std::size_t test_normals = static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.anomalous_frames) * ratio));
  test_normals = std::min(test_normals, spec.normal_frames - 1);
  const std::size_t train_normals = spec.normal_frames - test_normals;

  // Event sizes: full events of event_length, remainder folded into the last.
  std::vector<std::size_t> events;
  if (spec.anomalous_frames > 0) {
    const std::size_t count = std::max<std::size_t>(1, spec.anomalous_frames / spec.event_length);
    events.assign(count, spec.event_length);
    if (spec.anomalous_frames < spec.event_length) {
      events.back() = spec.anomalous_frames;
    } else {
      events.back() += spec.anomalous_frames % spec.event_length;
    }
  }
  // Normal test stretches around and between events.
  const std::vector<std::size_t> gaps = split_evenly(test_normals, events.size() + 1);

  Rng rng(spec.seed);
  std::vector<Walker> background;
  for (std::size_t p = 0; p < spec.background_persons; ++p) {
    background.emplace_back(static_cast<TrackId>(p), spec.style, rng);
  }

  FrameIndex next = spec.first_frame;
  const auto emit = [&](CameraDataset& into, Label label, Walker* actor) {
    FrameRecord frame;
    frame.camera_id = spec.camera_id;
    frame.frame_index = next++;
    frame.label = label;
    for (Walker& w : background) frame.persons.push_back(w.step(rng));
    if (actor != nullptr) {
      frame.persons.push_back(actor->step(rng));
      frame.anomaly_regions.push_back(frame.persons.back().bbox);
    }
    into.frames.push_back(std::move(frame));
  };

  SplitSet split;
  split.train.camera_id = spec.camera_id;
  split.test.camera_id = spec.camera_id;
  for (std::size_t i = 0; i < train_normals; ++i) emit(split.train, Label::kNormal, nullptr);
  for (std::size_t e = 0; e <= events.size(); ++e) {
    for (std::size_t i = 0; i < gaps[e]; ++i) emit(split.test, Label::kNormal, nullptr);
    if (e == events.size()) break;
    const AnomalyKind kind = spec.kinds[e % spec.kinds.size()];
    Walker actor(kActorTrackBase + e, actor_style(spec, kind), rng);
    actor.set_frozen(kind == AnomalyKind::kFrozenPose);
    actor.set_collapse(kind == AnomalyKind::kLimbCollapse ? 0.8 : 0.0);
    for (std::size_t i = 0; i < events[e]; ++i) emit(split.test, Label::kAnomalous, &actor);
  }
  return split;
}

ShiftScenario generate_shift_scenario(std::uint64_t seed,
                                      std::size_t normal_frames,
                                      std::size_t anomalous_frames,
                                      std::size_t origin_frames) {
  SyntheticSpec target;
  target.camera_id = "TARGET";
  target.normal_frames = normal_frames;
  target.anomalous_frames = anomalous_frames;
  target.seed = derive_seed(seed, "synthetic/target");

  SyntheticSpec origin;
  origin.camera_id = "ORIGIN";
  origin.normal_frames = origin_frames;
  origin.anomalous_frames = 0;
  origin.test_normal_share = 0.0;
  origin.style.arm_raise = 35.0;
  origin.style.swing_amplitude = 20.0;
  origin.style.swing_rate = 0.12;
  origin.seed = derive_seed(seed, "synthetic/origin");

  ShiftScenario scenario;
  scenario.target = generate_synthetic(target);
  scenario.origin = generate_synthetic(origin).train;
  return scenario;
}

}  // namespace ucal
