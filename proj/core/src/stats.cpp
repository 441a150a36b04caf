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

#include "ucal/stats.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ucal/error.hpp"

namespace ucal {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double frame_max_iou(const FrameRecord& frame) {
  double best = 0.0;
  const auto& persons = frame.persons;
  for (std::size_t i = 0; i < persons.size(); ++i) {
    for (std::size_t j = i + 1; j < persons.size(); ++j) {
      best = std::max(best, iou(persons[i].bbox, persons[j].bbox));
    }
  }
  return best;
}

DatasetStats compute_stats(std::span<const FrameRecord> frames,
                           std::string camera_id) {
  if (frames.empty()) {
    throw DataError(fmt::format("camera {}: no frames to summarize", camera_id));
  }
  DatasetStats stats;
  stats.camera_id = std::move(camera_id);
  stats.frame_count = frames.size();
  stats.max_iou_samples.reserve(frames.size());
  for (const FrameRecord& frame : frames) {
    stats.pose_count += frame.persons.size();
    if (frame.label == Label::kAnomalous) ++stats.anomaly_frame_count;
    ++stats.crowd_density_histogram[frame.persons.size()];
    stats.max_iou_samples.push_back(frame_max_iou(frame));
  }
  stats.anomaly_fraction = static_cast<double>(stats.anomaly_frame_count) /
                           static_cast<double>(stats.frame_count);
  return stats;
}

DatasetStats compute_stats(const CameraDataset& dataset) {
  return compute_stats(dataset.frames, dataset.camera_id);
}

DatasetStats merge_stats(const DatasetStats& a, const DatasetStats& b) {
  DatasetStats out = a;
  out.frame_count += b.frame_count;
  out.pose_count += b.pose_count;
  out.anomaly_frame_count += b.anomaly_frame_count;
  for (const auto& [persons, count] : b.crowd_density_histogram) {
    out.crowd_density_histogram[persons] += count;
  }
  out.max_iou_samples.insert(out.max_iou_samples.end(),
                             b.max_iou_samples.begin(), b.max_iou_samples.end());
  out.anomaly_fraction =
      out.frame_count == 0 ? 0.0
                           : static_cast<double>(out.anomaly_frame_count) /
                                 static_cast<double>(out.frame_count);
  return out;
}

double median_max_iou(const DatasetStats& stats) {
  std::vector<double> v = stats.max_iou_samples;
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void write_stats_csv_header(std::ostream& os) {
  os << "camera_id,frame_count,pose_count,anomaly_frame_count,"
        "anomaly_fraction,median_max_iou,crowd_density\n";
}

void write_stats_csv_row(std::ostream& os, const DatasetStats& stats) {
  std::string density;
  for (const auto& [persons, count] : stats.crowd_density_histogram) {
    if (!density.empty()) density += ';';
    density += fmt::format("{}:{}", persons, count);
  }
  fmt::print(os, "{},{},{},{},{:.6f},{:.6f},{}\n", stats.camera_id,
             stats.frame_count, stats.pose_count, stats.anomaly_frame_count,
             stats.anomaly_fraction, median_max_iou(stats), density);
}

void write_max_iou_csv(std::ostream& os, std::span<const DatasetStats> stats) {
  os << "camera_id,sample,max_iou\n";
  for (const DatasetStats& s : stats) {
    for (std::size_t i = 0; i < s.max_iou_samples.size(); ++i) {
      fmt::print(os, "{},{},{:.6f}\n", s.camera_id, i, s.max_iou_samples[i]);
    }
  }
}

}  // namespace ucal
