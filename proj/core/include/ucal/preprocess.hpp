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

#ifndef UCAL_PREPROCESS_HPP
#define UCAL_PREPROCESS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ucal/types.hpp"

namespace ucal {

/// Coordinates per normalized pose: 17 joints times (x, y).
inline constexpr std::size_t kPoseFeatures = 2 * kNumKeypoints;

using NormalizedPose = std::array<double, kPoseFeatures>;

/// A fixed-length run of one person's normalized poses.
struct PoseWindow {
  TrackId track_id = 0;
  std::string camera_id;
  FrameIndex start_frame = 0;
  std::size_t length = 0;
  /// length * 34 values, frame-major, (x, y) interleaved per joint.
  std::vector<double> features;
  std::vector<FrameIndex> covered_frames;

  std::span<const double> frame(std::size_t i) const {
    return std::span<const double>(features).subspan(i * kPoseFeatures,
                                                     kPoseFeatures);
  }

  friend bool operator==(const PoseWindow&, const PoseWindow&) = default;
};

struct PreprocessOptions {
  std::size_t max_gap = 14;
  std::size_t smooth_window = 15;
  std::size_t window_length = 24;
  std::size_t stride = 6;
};

/// Fills internal gaps of at most `max_gap` missing frames by linear
/// interpolation. Inserted observations are flagged interpolated and carry
/// no keypoint visibility. Leading and trailing absence is left alone.
Track interpolate_track(const Track& track, std::size_t max_gap = 14);

/// Centered moving average of keypoint coordinates over `window`
/// observations, shrinking symmetrically at run boundaries. Runs are maximal
/// stretches of consecutive frame indices; averaging never crosses a gap.
/// Throws DataError for an even or zero window.
Track smooth_track(const Track& track, std::size_t window = 15);

/// Keypoints relative to the bbox center, divided by the bbox diagonal.
/// Throws DataError for a degenerate bbox.
NormalizedPose normalize_pose(const PersonObservation& observation);

/// Windows of `length` frames every `stride` frames over each run of
/// consecutive frames. Runs shorter than `length` contribute nothing.
std::vector<PoseWindow> window_track(const Track& track, std::size_t length,
                                     std::size_t stride);

/// Number of windows a run of n frames yields.
constexpr std::size_t window_count(std::size_t n, std::size_t length,
                                   std::size_t stride) {
  return n < length ? 0 : (n - length) / stride + 1;
}

/// group_tracks -> interpolate -> smooth -> window, for a whole dataset.
std::vector<PoseWindow> prepare_windows(const CameraDataset& dataset,
                                        const PreprocessOptions& options);

}  // namespace ucal

#endif  // UCAL_PREPROCESS_HPP
