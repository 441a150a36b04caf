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

#include "ucal/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ucal/error.hpp"

namespace ucal {
namespace {

double lerp(double a, double b, double t) { return a + (b - a) * t; }

// [begin, end) index ranges of consecutive frame indices.
std::vector<std::pair<std::size_t, std::size_t>> consecutive_runs(
    const Track& track) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  const auto& pts = track.points;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= pts.size(); ++i) {
    if (i == pts.size() || pts[i].frame_index != pts[i - 1].frame_index + 1) {
      if (i > begin) runs.emplace_back(begin, i);
      begin = i;
    }
  }
  return runs;
}

}  // namespace

Track interpolate_track(const Track& track, std::size_t max_gap) {
  Track out;
  out.track_id = track.track_id;
  out.camera_id = track.camera_id;
  out.points.reserve(track.points.size());
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    const TrackPoint& cur = track.points[i];
    if (i > 0) {
      const TrackPoint& prev = track.points[i - 1];
      const FrameIndex span = cur.frame_index - prev.frame_index;
      const FrameIndex missing = span - 1;
      if (missing >= 1 && missing <= max_gap) {
        const PersonObservation& a = prev.observation;
        const PersonObservation& b = cur.observation;
        for (FrameIndex f = prev.frame_index + 1; f < cur.frame_index; ++f) {
          const double t = static_cast<double>(f - prev.frame_index) /
                           static_cast<double>(span);
          PersonObservation obs;
          obs.track_id = track.track_id;
          obs.interpolated = true;
          obs.bbox = {lerp(a.bbox.x1, b.bbox.x1, t), lerp(a.bbox.y1, b.bbox.y1, t),
                      lerp(a.bbox.x2, b.bbox.x2, t), lerp(a.bbox.y2, b.bbox.y2, t)};
          for (std::size_t k = 0; k < kNumKeypoints; ++k) {
            obs.keypoints[k].x = lerp(a.keypoints[k].x, b.keypoints[k].x, t);
            obs.keypoints[k].y = lerp(a.keypoints[k].y, b.keypoints[k].y, t);
          }
          out.points.push_back({f, std::move(obs)});
        }
      }
    }
    out.points.push_back(cur);
  }
  return out;
}

Track smooth_track(const Track& track, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw DataError(fmt::format("smoothing window must be odd, got {}", window));
  }
  Track out = track;
  const std::size_t half_max = window / 2;
  for (auto [begin, end] : consecutive_runs(track)) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t half = std::min({half_max, i - begin, end - 1 - i});
      const double n = static_cast<double>(2 * half + 1);
      for (std::size_t k = 0; k < kNumKeypoints; ++k) {
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t j = i - half; j <= i + half; ++j) {
          sx += track.points[j].observation.keypoints[k].x;
          sy += track.points[j].observation.keypoints[k].y;
        }
        Keypoint& kp = out.points[i].observation.keypoints[k];
        kp.x = sx / n;
        kp.y = sy / n;
      }
    }
  }
  return out;
}

NormalizedPose normalize_pose(const PersonObservation& observation) {
  const BoundingBox& box = observation.bbox;
  const double diagonal = std::hypot(box.width(), box.height());
  if (!(diagonal > 0.0) || !std::isfinite(diagonal)) {
    throw DataError(fmt::format("track {}: degenerate bbox", observation.track_id));
  }
  const double cx = box.center_x();
  const double cy = box.center_y();
  NormalizedPose pose{};
  for (std::size_t k = 0; k < kNumKeypoints; ++k) {
    pose[2 * k] = (observation.keypoints[k].x - cx) / diagonal;
    pose[2 * k + 1] = (observation.keypoints[k].y - cy) / diagonal;
  }
  return pose;
}

std::vector<PoseWindow> window_track(const Track& track, std::size_t length,
                                     std::size_t stride) {
  if (length == 0 || stride == 0) {
    throw DataError("window length and stride must be positive");
  }
  std::vector<PoseWindow> windows;
  for (auto [begin, end] : consecutive_runs(track)) {
    const std::size_t n = end - begin;
    if (n < length) continue;
    std::vector<NormalizedPose> poses;
    poses.reserve(n);
    for (std::size_t i = begin; i < end; ++i) {
      poses.push_back(normalize_pose(track.points[i].observation));
    }
    for (std::size_t start = 0; start + length <= n; start += stride) {
      PoseWindow w;
      w.track_id = track.track_id;
      w.camera_id = track.camera_id;
      w.start_frame = track.points[begin + start].frame_index;
      w.length = length;
      w.features.reserve(length * kPoseFeatures);
      w.covered_frames.reserve(length);
      for (std::size_t i = start; i < start + length; ++i) {
        w.features.insert(w.features.end(), poses[i].begin(), poses[i].end());
        w.covered_frames.push_back(track.points[begin + i].frame_index);
      }
      windows.push_back(std::move(w));
    }
  }
  return windows;
}

std::vector<PoseWindow> prepare_windows(const CameraDataset& dataset,
                                        const PreprocessOptions& options) {
  std::vector<PoseWindow> windows;
  for (const Track& raw : group_tracks(dataset)) {
    Track track = smooth_track(interpolate_track(raw, options.max_gap),
                               options.smooth_window);
    auto part = window_track(track, options.window_length, options.stride);
    std::move(part.begin(), part.end(), std::back_inserter(windows));
  }
  return windows;
}

}  // namespace ucal
