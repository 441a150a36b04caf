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

// ucal: command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 data/validation error, 3 runtime
// failure. Diagnostics go to stderr; results go to files or stdout.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ucal/dataset_io.hpp"
#include "ucal/error.hpp"
#include "ucal/random.hpp"
#include "ucal/rearrange.hpp"
#include "ucal/report.hpp"
#include "ucal/runner.hpp"
#include "ucal/stats.hpp"
#include "ucal/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

// Missing required input discovered after the config file has been merged.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags shared by the run and rearrange subcommands. Optional members stay
// empty unless given on the command line, so they only override the config.
struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> camera;
  std::optional<std::string> train;
  std::optional<std::string> test;
  std::optional<std::string> origin;
  std::optional<std::string> scorer;
  std::optional<std::size_t> neighbors;
  std::optional<std::size_t> capacity;
  std::optional<double> constant_value;
  std::optional<std::size_t> window_length;
  std::optional<std::size_t> stride;
  std::optional<std::size_t> max_gap;
  std::optional<std::size_t> smooth_window;
  std::optional<std::string> aggregator;
  std::optional<std::size_t> k;
  std::optional<std::size_t> inject_count;
  std::optional<double> target_ratio;
  std::optional<double> balance_tolerance;
};

void add_common(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--camera", f.camera, "Camera id");
  cmd->add_option("--train", f.train, "Training annotations (JSONL)");
  cmd->add_option("--test", f.test, "Test annotations (JSONL)");
}

void add_plan(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--k", f.k, "Number of stream slices");
  cmd->add_option("--inject-count", f.inject_count, "Test anomalies moved into training");
  cmd->add_option("--target-ratio", f.target_ratio, "Upper bound on the stream anomaly fraction");
  cmd->add_option("--balance-tolerance", f.balance_tolerance, "Allowed test imbalance");
}

void add_protocol(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--scorer", f.scorer, "gaussian | knn | constant");
  cmd->add_option("--neighbors", f.neighbors, "kNN neighbor count");
  cmd->add_option("--capacity", f.capacity, "kNN reservoir capacity");
  cmd->add_option("--constant-value", f.constant_value, "Score of the constant scorer");
  cmd->add_option("--window-length", f.window_length, "Frames per pose window");
  cmd->add_option("--stride", f.stride, "Window stride in frames");
  cmd->add_option("--max-gap", f.max_gap, "Longest gap filled by interpolation");
  cmd->add_option("--smooth-window", f.smooth_window, "Odd smoothing window");
  cmd->add_option("--aggregator", f.aggregator, "max | mean");
}

template <typename T>
void apply(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

ucal::RunConfig merge(const RunFlags& f, ucal::RunMode mode) {
  ucal::RunConfig c = f.config.empty() ? ucal::RunConfig{} : ucal::load_run_config(f.config);
  c.mode = mode;
  apply(f.seed, c.seed);
  apply(f.camera, c.camera);
  if (f.out) c.out_dir = *f.out;
  if (f.train) c.train_path = *f.train;
  if (f.test) c.test_path = *f.test;
  if (f.origin) c.origin_path = *f.origin;
  apply(f.scorer, c.scorer.type);
  apply(f.neighbors, c.scorer.knn_neighbors);
  apply(f.capacity, c.scorer.knn_capacity);
  apply(f.constant_value, c.scorer.constant_value);
  apply(f.window_length, c.preprocess.window_length);
  apply(f.stride, c.preprocess.stride);
  apply(f.max_gap, c.preprocess.max_gap);
  apply(f.smooth_window, c.preprocess.smooth_window);
  if (f.aggregator) c.aggregator = ucal::parse_aggregator(*f.aggregator);
  if (mode == ucal::RunMode::kContinual || f.k || f.inject_count || f.target_ratio ||
      f.balance_tolerance) {
    ucal::RearrangePlan plan = c.plan.value_or(ucal::RearrangePlan{});
    apply(f.k, plan.k);
    if (f.inject_count) plan.inject_count = *f.inject_count;
    apply(f.target_ratio, plan.target_train_anomaly_ratio);
    apply(f.balance_tolerance, plan.balance_tolerance);
    c.plan = plan;
  }

  if (c.train_path.empty()) throw UsageError("--train is required");
  if (c.test_path.empty()) throw UsageError("--test is required");
  if (mode == ucal::RunMode::kContinual && c.origin_path.empty()) {
    throw UsageError("--origin is required");
  }
  return c;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ucal::IoError(fmt::format("cannot open {} for writing", path.string()));
  return out;
}

// --- subcommands -----------------------------------------------------------

struct StatsFlags {
  std::vector<std::string> files;
  std::string camera;
  std::string iou_out;
};

int cmd_stats(const StatsFlags& f) {
  std::map<std::string, ucal::DatasetStats> merged;
  for (const std::string& file : f.files) {
    for (const auto& [id, ds] : ucal::load_cameras(file)) {
      if (!f.camera.empty() && id != f.camera) continue;
      const ucal::DatasetStats s = ucal::compute_stats(ds);
      auto [it, inserted] = merged.try_emplace(id, s);
      if (!inserted) it->second = ucal::merge_stats(it->second, s);
    }
  }
  if (merged.empty()) {
    throw ucal::DataError(f.camera.empty() ? "no frames in input"
                                           : fmt::format("camera {} not found", f.camera));
  }
  std::vector<ucal::DatasetStats> all;
  for (auto& [id, s] : merged) all.push_back(std::move(s));
  ucal::write_stats_csv_header(std::cout);
  for (const auto& s : all) ucal::write_stats_csv_row(std::cout, s);
  if (!f.iou_out.empty()) {
    auto out = open_out(f.iou_out);
    ucal::write_max_iou_csv(out, all);
  }
  return 0;
}

int cmd_rearrange(const RunFlags& f) {
  ucal::RunConfig c = merge(f, ucal::RunMode::kStandard);
  if (c.out_dir.empty()) throw UsageError("--out is required");
  const ucal::RearrangePlan plan = ucal::seeded_plan(c);
  plan.validate();
  const ucal::SplitSet split = ucal::load_split(c.train_path, c.test_path, c.camera);
  const ucal::ContinualSplit cs = ucal::rearrange(split, plan);
  const ucal::ContinualStats stats = ucal::verify(cs);

  fs::create_directories(c.out_dir);
  for (std::size_t i = 0; i < cs.slice_count(); ++i) {
    ucal::write_frames(cs.slice(i), c.out_dir / fmt::format("slice_{:02}.jsonl", i + 1));
  }
  ucal::write_dataset(cs.test, c.out_dir / "test.jsonl");
  auto prov = open_out(c.out_dir / "provenance.csv");
  prov << "frame_index,origin,slice\n";
  for (std::size_t i = 0; i < cs.train_stream.size(); ++i) {
    fmt::print(prov, "{},{},{}\n", cs.train_stream[i].frame_index,
               ucal::to_string(cs.train_origin[i]), cs.slice_of(i));
  }
  for (std::size_t i = 0; i < cs.test.frames.size(); ++i) {
    fmt::print(prov, "{},{},0\n", cs.test.frames[i].frame_index,
               ucal::to_string(cs.test_origin[i]));
  }
  ucal::write_manifest(c.out_dir, "rearrange", ucal::run_config_json(c), c.seed);

  ucal::write_stats_csv_header(std::cout);
  ucal::DatasetStats train = stats.train;
  train.camera_id += ":train";
  ucal::DatasetStats test = stats.test;
  test.camera_id += ":test";
  ucal::write_stats_csv_row(std::cout, train);
  ucal::write_stats_csv_row(std::cout, test);
  return 0;
}

int cmd_run_standard(const RunFlags& f) {
  const ucal::RunConfig c = merge(f, ucal::RunMode::kStandard);
  const auto results = ucal::run_standard(c);
  ucal::write_standard_csv(std::cout, results);
  return 0;
}

int cmd_run_continual(const RunFlags& f) {
  const ucal::RunConfig c = merge(f, ucal::RunMode::kContinual);
  const ucal::ContinualRun run = ucal::run_continual(c);
  const std::vector<ucal::ContinualResult> results{run.result};
  ucal::write_continual_csv(std::cout, results);
  return 0;
}

struct ReportFlags {
  std::string input;
  std::string format = "markdown";
};

int cmd_report(const ReportFlags& f) {
  std::ifstream in(f.input);
  if (!in) throw ucal::IoError(fmt::format("cannot open {}", f.input));
  const ucal::ParsedReport parsed = ucal::read_report_csv(in);
  if (f.format == "csv") {
    if (!parsed.continual.empty()) ucal::write_continual_csv(std::cout, parsed.continual);
    if (!parsed.standard.empty()) ucal::write_standard_csv(std::cout, parsed.standard);
  } else {
    if (!parsed.continual.empty()) ucal::write_continual_markdown(std::cout, parsed.continual);
    if (!parsed.standard.empty()) ucal::write_standard_markdown(std::cout, parsed.standard);
  }
  return 0;
}

struct SynthFlags {
  std::string out;
  std::uint64_t seed = 0;
  std::string camera = "SYN";
  std::size_t normal = 5000;
  std::size_t anomalous = 500;
  std::size_t origin = 1500;
  std::vector<std::string> kinds = {"velocity_spike"};
  bool shift = false;
};

int cmd_synth(const SynthFlags& f) {
  fs::create_directories(f.out);
  if (f.shift) {
    const ucal::ShiftScenario s =
        ucal::generate_shift_scenario(f.seed, f.normal, f.anomalous, f.origin);
    ucal::write_dataset(s.target.train, fs::path(f.out) / "train.jsonl");
    ucal::write_dataset(s.target.test, fs::path(f.out) / "test.jsonl");
    ucal::write_dataset(s.origin, fs::path(f.out) / "origin.jsonl");
  } else {
    ucal::SyntheticSpec spec;
    spec.camera_id = f.camera;
    spec.normal_frames = f.normal;
    spec.anomalous_frames = f.anomalous;
    spec.seed = f.seed;
    spec.kinds.clear();
    for (const std::string& k : f.kinds) spec.kinds.push_back(ucal::parse_anomaly_kind(k));
    const ucal::SplitSet split = ucal::generate_synthetic(spec);
    ucal::write_dataset(split.train, fs::path(f.out) / "train.jsonl");
    ucal::write_dataset(split.test, fs::path(f.out) / "test.jsonl");
  }
  ucal::write_manifest(f.out, "synth",
                       fmt::format("{{\"anomalous\":{},\"normal\":{},\"shift\":{}}}",
                                   f.anomalous, f.normal, f.shift),
                       f.seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continual pose-based anomaly detection benchmark harness", "ucal"};
  app.require_subcommand(1);

  StatsFlags stats;
  auto* stats_cmd = app.add_subcommand("stats", "Per-camera dataset statistics as CSV");
  stats_cmd->add_option("files", stats.files, "Annotation files (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--camera", stats.camera, "Only this camera");
  stats_cmd->add_option("--iou-out", stats.iou_out, "Write per-frame max IoU samples here");

  RunFlags rearrange;
  auto* rearrange_cmd = app.add_subcommand("rearrange", "Build a continual split");
  add_common(rearrange_cmd, rearrange);
  add_plan(rearrange_cmd, rearrange);

  RunFlags standard;
  auto* standard_cmd = app.add_subcommand("run-standard", "Standard single-fit evaluation");
  add_common(standard_cmd, standard);
  add_protocol(standard_cmd, standard);

  RunFlags continual;
  auto* continual_cmd = app.add_subcommand("run-continual", "Continual evaluation");
  add_common(continual_cmd, continual);
  add_protocol(continual_cmd, continual);
  add_plan(continual_cmd, continual);
  continual_cmd->add_option("--origin", continual.origin, "Pretraining annotations (JSONL)");

  ReportFlags report;
  auto* report_cmd = app.add_subcommand("report", "Render a report.csv as tables");
  report_cmd->add_option("input", report.input, "report.csv")->required();
  report_cmd->add_option("--format", report.format, "markdown | csv")
      ->check(CLI::IsMember({"markdown", "csv"}));

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--camera", synth.camera, "Camera id");
  synth_cmd->add_option("--normal", synth.normal, "Normal frames");
  synth_cmd->add_option("--anomalous", synth.anomalous, "Anomalous frames");
  synth_cmd->add_option("--origin-frames", synth.origin, "Origin frames (with --shift)");
  synth_cmd->add_option("--kinds", synth.kinds, "velocity_spike | frozen_pose | limb_collapse");
  synth_cmd->add_flag("--shift", synth.shift, "Target plus shifted origin camera");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (app.get_subcommands().empty()) std::cerr << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (stats_cmd->parsed()) return cmd_stats(stats);
    if (rearrange_cmd->parsed()) return cmd_rearrange(rearrange);
    if (standard_cmd->parsed()) return cmd_run_standard(standard);
    if (continual_cmd->parsed()) return cmd_run_continual(continual);
    if (report_cmd->parsed()) return cmd_report(report);
    if (synth_cmd->parsed()) return cmd_synth(synth);
  } catch (const UsageError& e) {
    fmt::print(std::cerr, "ucal: {}\n\n{}", e.what(), app.help());
    return kExitUsage;
  } catch (const ucal::DataError& e) {
    fmt::print(std::cerr, "ucal: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "ucal: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
