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

#ifndef UCAL_TYPES_HPP
#define UCAL_TYPES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucal {

/// Number of joints in the COCO17 layout.
inline constexpr std::size_t kNumKeypoints = 17;

using FrameIndex = std::uint64_t;
using TrackId = std::uint64_t;

enum class Label { kNormal, kAnomalous };

std::string_view to_string(Label label);
/// Parses "normal" / "anomalous"; throws DataError otherwise.
Label parse_label(std::string_view text);

/// One joint. An absent visibility marks an interpolated (not observed) joint.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> visibility;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }

  /// x1 < x2, y1 < y2, all coordinates finite and non-negative.
  bool valid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

using PoseKeypoints = std::array<Keypoint, kNumKeypoints>;

struct PersonObservation {
  TrackId track_id = 0;
  BoundingBox bbox;
  PoseKeypoints keypoints{};
  bool interpolated = false;

  friend bool operator==(const PersonObservation&,
                         const PersonObservation&) = default;
};

struct FrameRecord {
  std::string camera_id;
  FrameIndex frame_index = 0;
  Label label = Label::kNormal;
  std::vector<PersonObservation> persons;
  std::vector<BoundingBox> anomaly_regions;
  // Unknown top-level JSON members, kept verbatim as a serialized object so
  // they survive a load/write cycle. Empty when there are none.
  std::string extra_json;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

/// Frames of a single camera in strictly increasing frame_index order.
struct CameraDataset {
  std::string camera_id;
  std::vector<FrameRecord> frames;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }

  friend bool operator==(const CameraDataset&, const CameraDataset&) = default;
};

/// Train/test partition of one camera.
struct SplitSet {
  CameraDataset train;
  CameraDataset test;
};

struct TrackPoint {
  FrameIndex frame_index = 0;
  PersonObservation observation;

  friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

/// One person over time, observations strictly increasing in frame_index.
struct Track {
  TrackId track_id = 0;
  std::string camera_id;
  std::vector<TrackPoint> points;

  std::size_t size() const { return points.size(); }

  friend bool operator==(const Track&, const Track&) = default;
};

// Validation. Each throws DataError naming the offending frame.
void validate_person(const PersonObservation& person, FrameIndex frame_index);
void validate_frame(const FrameRecord& frame);
void validate_dataset(const CameraDataset& dataset);
/// EP1 split: train all-normal, disjoint frame indices, both sides valid.
void validate_standard_split(const SplitSet& split);

/// Builds a dataset from frames in any order; sorts and validates.
CameraDataset make_dataset(std::vector<FrameRecord> frames,
                           std::string camera_id = {});

/// Counts frames carrying `label`.
std::size_t count_label(std::span<const FrameRecord> frames, Label label);

/// Partitions every observation into per-person tracks ordered by track_id.
/// Throws DataError on a duplicate (track_id, frame_index) pair.
std::vector<Track> group_tracks(const CameraDataset& dataset);

}  // namespace ucal

#endif  // UCAL_TYPES_HPP
