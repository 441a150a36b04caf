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

// JSONL annotation files, one frame per line:
//
//   {"camera_id": "C0", "frame_index": 12, "label": "normal",
//    "anomaly_regions": [[x1,y1,x2,y2], ...],
//    "persons": [{"track_id": 3, "bbox": [x1,y1,x2,y2],
//                 "interpolated": false,
//                 "keypoints": [[x, y, vis-or-null], ... 17 entries]}]}
//
// Unknown top-level members are carried through FrameRecord::extra_json.

#ifndef UCAL_DATASET_IO_HPP
#define UCAL_DATASET_IO_HPP

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucal/types.hpp"

namespace ucal {

/// Parses one JSONL line. Errors mention `line_number` when non-zero.
FrameRecord parse_frame(std::string_view line, std::size_t line_number = 0);

/// Serializes a frame to a single line (no trailing newline).
std::string serialize_frame(const FrameRecord& frame);

/// Reads every frame in a file, in file order, validating each frame.
std::vector<FrameRecord> read_frames(const std::filesystem::path& path);

/// Loads a single-camera file, sorted by frame_index and validated.
CameraDataset load_dataset(const std::filesystem::path& path);

/// Loads a file that may hold several cameras, grouped by camera_id.
std::map<std::string, CameraDataset> load_cameras(
    const std::filesystem::path& path);

void write_frames(std::span<const FrameRecord> frames,
                  const std::filesystem::path& path);

void write_dataset(const CameraDataset& dataset,
                   const std::filesystem::path& path);

}  // namespace ucal

#endif  // UCAL_DATASET_IO_HPP
