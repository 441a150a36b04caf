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

#include "ucal/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include <fmt/format.h>

#include "ucal/error.hpp"

namespace ucal {

std::string_view to_string(Label label) {
  return label == Label::kNormal ? "normal" : "anomalous";
}

Label parse_label(std::string_view text) {
  if (text == "normal") return Label::kNormal;
  if (text == "anomalous") return Label::kAnomalous;
  throw DataError(fmt::format("unknown label \"{}\"", text));
}

bool BoundingBox::valid() const {
  const bool finite = std::isfinite(x1) && std::isfinite(y1) &&
                      std::isfinite(x2) && std::isfinite(y2);
  return finite && x1 >= 0.0 && y1 >= 0.0 && x1 < x2 && y1 < y2;
}

void validate_person(const PersonObservation& person, FrameIndex frame_index) {
  if (!person.bbox.valid()) {
    throw DataError(fmt::format("frame {}: track {} has an invalid bbox",
                                frame_index, person.track_id));
  }
  bool all_absent = true;
  for (const Keypoint& kp : person.keypoints) {
    if (!std::isfinite(kp.x) || !std::isfinite(kp.y)) {
      throw DataError(fmt::format("frame {}: track {} has a non-finite keypoint",
                                  frame_index, person.track_id));
    }
    if (kp.visibility) {
      all_absent = false;
      const double v = *kp.visibility;
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DataError(
            fmt::format("frame {}: track {} keypoint visibility {} outside [0,1]",
                        frame_index, person.track_id, v));
      }
    }
  }
  if (person.interpolated != all_absent) {
    throw DataError(fmt::format(
        "frame {}: track {} interpolated flag disagrees with keypoint visibility",
        frame_index, person.track_id));
  }
}

void validate_frame(const FrameRecord& frame) {
  if (frame.label == Label::kNormal && !frame.anomaly_regions.empty()) {
    throw DataError(fmt::format(
        "frame {}: normal frame carries anomaly regions", frame.frame_index));
  }
  for (const BoundingBox& region : frame.anomaly_regions) {
    if (!region.valid()) {
      throw DataError(fmt::format("frame {}: invalid anomaly region",
                                  frame.frame_index));
    }
  }
  std::unordered_set<TrackId> ids;
  for (const PersonObservation& person : frame.persons) {
    validate_person(person, frame.frame_index);
    if (!ids.insert(person.track_id).second) {
      throw DataError(fmt::format("frame {}: duplicate track_id {}",
                                  frame.frame_index, person.track_id));
    }
  }
}

void validate_dataset(const CameraDataset& dataset) {
  for (std::size_t i = 0; i < dataset.frames.size(); ++i) {
    const FrameRecord& frame = dataset.frames[i];
    if (frame.camera_id != dataset.camera_id) {
      throw DataError(fmt::format(
          "frame {}: camera_id \"{}\" differs from dataset camera \"{}\"",
          frame.frame_index, frame.camera_id, dataset.camera_id));
    }
    if (i > 0 && frame.frame_index <= dataset.frames[i - 1].frame_index) {
      throw DataError(fmt::format(
          "frame {}: frame_index not strictly increasing (duplicate or unsorted)",
          frame.frame_index));
    }
    validate_frame(frame);
  }
}

void validate_standard_split(const SplitSet& split) {
  validate_dataset(split.train);
  validate_dataset(split.test);
  for (const FrameRecord& frame : split.train.frames) {
    if (frame.label != Label::kNormal) {
      throw DataError(fmt::format(
          "frame {}: anomalous frame in a normal-only training set",
          frame.frame_index));
    }
  }
  std::unordered_set<FrameIndex> train_ids;
  train_ids.reserve(split.train.size());
  for (const FrameRecord& frame : split.train.frames) {
    train_ids.insert(frame.frame_index);
  }
  for (const FrameRecord& frame : split.test.frames) {
    if (train_ids.contains(frame.frame_index)) {
      throw DataError(fmt::format("frame {}: present in both train and test",
                                  frame.frame_index));
    }
  }
}

CameraDataset make_dataset(std::vector<FrameRecord> frames,
                           std::string camera_id) {
  std::sort(frames.begin(), frames.end(),
            [](const FrameRecord& a, const FrameRecord& b) {
              return a.frame_index < b.frame_index;
            });
  CameraDataset dataset;
  dataset.camera_id = camera_id.empty() && !frames.empty()
                          ? frames.front().camera_id
                          : std::move(camera_id);
  dataset.frames = std::move(frames);
  validate_dataset(dataset);
  return dataset;
}

std::size_t count_label(std::span<const FrameRecord> frames, Label label) {
  return static_cast<std::size_t>(
      std::count_if(frames.begin(), frames.end(),
                    [label](const FrameRecord& f) { return f.label == label; }));
}

std::vector<Track> group_tracks(const CameraDataset& dataset) {
  std::map<TrackId, Track> by_id;
  for (const FrameRecord& frame : dataset.frames) {
    for (const PersonObservation& person : frame.persons) {
      Track& track = by_id[person.track_id];
      if (track.points.empty()) {
        track.track_id = person.track_id;
        track.camera_id = dataset.camera_id;
      } else if (track.points.back().frame_index >= frame.frame_index) {
        throw DataError(fmt::format("duplicate (track_id {}, frame_index {})",
                                    person.track_id, frame.frame_index));
      }
      track.points.push_back({frame.frame_index, person});
    }
  }
  std::vector<Track> tracks;
  tracks.reserve(by_id.size());
  for (auto& [id, track] : by_id) tracks.push_back(std::move(track));
  return tracks;
}

}  // namespace ucal
