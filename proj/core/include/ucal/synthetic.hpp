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

#ifndef UCAL_SYNTHETIC_HPP
#define UCAL_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ucal/types.hpp"

namespace ucal {

enum class AnomalyKind {
  kVelocitySpike,  // fast travel and wide limb swings
  kFrozenPose,     // the actor holds one pose, perfectly still
  kLimbCollapse,   // limbs pulled in toward the hips
};

std::string_view to_string(AnomalyKind kind);
AnomalyKind parse_anomaly_kind(std::string_view text);

/// How simulated people move. Units are pixels and frames.
struct MotionStyle {
  double body_height = 150.0;     // nose-to-ankle span
  double speed = 0.8;             // travel per frame
  double swing_amplitude = 4.0;   // limb swing
  double swing_rate = 0.08;       // radians of gait phase per frame
  double arm_raise = 0.0;         // lifts elbows and wrists
  double jitter = 0.5;            // per-joint observation noise (std dev)
};

struct SyntheticSpec {
  std::string camera_id = "SYN";
  std::size_t normal_frames = 5000;
  std::size_t anomalous_frames = 500;
  /// Fraction of the test set that is normal; the remaining normals train.
  double test_normal_share = 0.7;
  /// People present in every frame, behaving normally.
  std::size_t background_persons = 3;
  /// Anomaly kinds, cycled over successive events.
  std::vector<AnomalyKind> kinds = {AnomalyKind::kVelocitySpike};
  /// Nominal frames per anomaly event; the remainder joins the last event.
  std::size_t event_length = 48;
  /// Multiplies travel speed and swing amplitude of velocity-spike actors.
  double anomaly_speed_factor = 6.0;
  MotionStyle style;
  FrameIndex first_frame = 0;
  std::uint64_t seed = 0;
};

/// Smooth random-walk pose tracks. Training frames come first in time, all
/// normal; the test part interleaves normal stretches with anomaly events in
/// which one extra person (a fresh track) misbehaves. Label counts are exact.
/// Throws DataError when no normal frames are requested.
SplitSet generate_synthetic(const SyntheticSpec& spec);

/// Target camera plus a differently-behaving origin camera for pretraining.
struct ShiftScenario {
  SplitSet target;
  CameraDataset origin;
};

/// The origin population raises its arms and swings its limbs far more than
/// the target's normals, so a model fit only on the origin misjudges the
/// target camera.
ShiftScenario generate_shift_scenario(std::uint64_t seed,
                                      std::size_t normal_frames = 5000,
                                      std::size_t anomalous_frames = 500,
                                      std::size_t origin_frames = 1500);

}  // namespace ucal

#endif  // UCAL_SYNTHETIC_HPP
