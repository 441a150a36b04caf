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

#include "ucal/dataset_io.hpp"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ucal/error.hpp"

namespace ucal {
namespace {

using nlohmann::json;

const std::array<std::string_view, 5> kKnownFields = {
    "camera_id", "frame_index", "label", "anomaly_regions", "persons"};

std::string where(std::size_t line_number) {
  return line_number > 0 ? fmt::format("line {}: ", line_number) : "";
}

BoundingBox parse_box(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw DataError("bbox must be an array of 4 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

json box_json(const BoundingBox& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

PersonObservation parse_person(const json& j, FrameIndex frame_index) {
  PersonObservation person;
  if (!j.at("track_id").is_number_unsigned()) {
    throw DataError(fmt::format("frame {}: track_id must be a non-negative integer",
                                frame_index));
  }
  person.track_id = j.at("track_id").get<TrackId>();
  person.bbox = parse_box(j.at("bbox"));
  person.interpolated = j.value("interpolated", false);
  const json& kps = j.at("keypoints");
  if (!kps.is_array() || kps.size() != kNumKeypoints) {
    throw DataError(fmt::format(
        "frame {}: track {} keypoint count {} (expected {})", frame_index,
        person.track_id, kps.is_array() ? kps.size() : 0, kNumKeypoints));
  }
  for (std::size_t i = 0; i < kNumKeypoints; ++i) {
    const json& kp = kps[i];
    if (!kp.is_array() || kp.size() < 2 || kp.size() > 3) {
      throw DataError(fmt::format("frame {}: track {} keypoint {} malformed",
                                  frame_index, person.track_id, i));
    }
    Keypoint& out = person.keypoints[i];
    out.x = kp[0].get<double>();
    out.y = kp[1].get<double>();
    if (kp.size() == 3 && !kp[2].is_null()) out.visibility = kp[2].get<double>();
  }
  return person;
}

json person_json(const PersonObservation& p) {
  json kps = json::array();
  for (const Keypoint& kp : p.keypoints) {
    kps.push_back(json::array(
        {kp.x, kp.y, kp.visibility ? json(*kp.visibility) : json(nullptr)}));
  }
  // nlohmann::json keeps object keys sorted, so output is byte-stable.
  return json{{"track_id", p.track_id},
              {"bbox", box_json(p.bbox)},
              {"interpolated", p.interpolated},
              {"keypoints", std::move(kps)}};
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {} for reading", path.string()));
  return in;
}

}  // namespace

FrameRecord parse_frame(std::string_view line, std::size_t line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(where(line_number) + "malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw DataError(where(line_number) + "frame must be an object");

  FrameRecord frame;
  try {
    frame.camera_id = j.at("camera_id").get<std::string>();
    if (!j.at("frame_index").is_number_unsigned()) {
      throw DataError("frame_index must be a non-negative integer");
    }
    frame.frame_index = j.at("frame_index").get<FrameIndex>();
    frame.label = parse_label(j.at("label").get<std::string>());
    if (auto it = j.find("anomaly_regions"); it != j.end()) {
      for (const json& box : *it) frame.anomaly_regions.push_back(parse_box(box));
    }
    if (auto it = j.find("persons"); it != j.end()) {
      for (const json& p : *it) {
        frame.persons.push_back(parse_person(p, frame.frame_index));
      }
    }
  } catch (const json::exception& e) {
    throw DataError(where(line_number) + "bad field: " + e.what());
  } catch (const DataError& e) {
    throw DataError(where(line_number) + e.what());
  }

  json extra = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(kKnownFields.begin(), kKnownFields.end(), it.key()) ==
        kKnownFields.end()) {
      extra[it.key()] = it.value();
    }
  }
  if (!extra.empty()) frame.extra_json = extra.dump();

  try {
    validate_frame(frame);
  } catch (const DataError& e) {
    throw DataError(where(line_number) + e.what());
  }
  return frame;
}

std::string serialize_frame(const FrameRecord& frame) {
  json j = frame.extra_json.empty() ? json::object()
                                    : json::parse(frame.extra_json);
  j["camera_id"] = frame.camera_id;
  j["frame_index"] = frame.frame_index;
  j["label"] = std::string(to_string(frame.label));
  json regions = json::array();
  for (const BoundingBox& b : frame.anomaly_regions) regions.push_back(box_json(b));
  j["anomaly_regions"] = std::move(regions);
  json persons = json::array();
  for (const PersonObservation& p : frame.persons) persons.push_back(person_json(p));
  j["persons"] = std::move(persons);
  return j.dump();
}

std::vector<FrameRecord> read_frames(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::vector<FrameRecord> frames;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    frames.push_back(parse_frame(line, line_number));
  }
  if (in.bad()) throw IoError(fmt::format("error reading {}", path.string()));
  return frames;
}

CameraDataset load_dataset(const std::filesystem::path& path) {
  return make_dataset(read_frames(path));
}

std::map<std::string, CameraDataset> load_cameras(
    const std::filesystem::path& path) {
  std::map<std::string, std::vector<FrameRecord>> grouped;
  for (FrameRecord& frame : read_frames(path)) {
    grouped[frame.camera_id].push_back(std::move(frame));
  }
  std::map<std::string, CameraDataset> cameras;
  for (auto& [id, frames] : grouped) {
    cameras.emplace(id, make_dataset(std::move(frames), id));
  }
  return cameras;
}

void write_frames(std::span<const FrameRecord> frames,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  for (const FrameRecord& frame : frames) {
    out << serialize_frame(frame) << '\n';
  }
  out.flush();
  if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

void write_dataset(const CameraDataset& dataset,
                   const std::filesystem::path& path) {
  write_frames(dataset.frames, path);
}

}  // namespace ucal
