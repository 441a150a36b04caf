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

#ifndef UCAL_STATS_HPP
#define UCAL_STATS_HPP

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ucal/types.hpp"

namespace ucal {

/// Occlusion, crowding and label statistics for one camera.
struct DatasetStats {
  std::string camera_id;
  std::size_t frame_count = 0;
  std::size_t pose_count = 0;
  std::size_t anomaly_frame_count = 0;
  double anomaly_fraction = 0.0;
  /// persons-per-frame -> number of frames.
  std::map<std::size_t, std::size_t> crowd_density_histogram;
  /// Highest pairwise IoU in each frame, in frame order.
  std::vector<double> max_iou_samples;
};

/// Intersection over union of two boxes treated as real rectangles.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Largest IoU over distinct person pairs; 0 with fewer than two persons.
double frame_max_iou(const FrameRecord& frame);

/// Throws DataError for an empty frame list.
DatasetStats compute_stats(std::span<const FrameRecord> frames,
                           std::string camera_id);
DatasetStats compute_stats(const CameraDataset& dataset);

/// Totals of two disjoint frame sets (same camera).
DatasetStats merge_stats(const DatasetStats& a, const DatasetStats& b);

/// Median of the max-IoU samples (0 when empty).
double median_max_iou(const DatasetStats& stats);

/// CSV: camera_id,frame_count,pose_count,anomaly_frame_count,
/// anomaly_fraction,median_max_iou,crowd_density
void write_stats_csv_header(std::ostream& os);
void write_stats_csv_row(std::ostream& os, const DatasetStats& stats);

/// CSV: camera_id,sample,max_iou (one row per frame).
void write_max_iou_csv(std::ostream& os, std::span<const DatasetStats> stats);

}  // namespace ucal

#endif  // UCAL_STATS_HPP
