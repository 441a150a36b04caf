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

// Evaluation protocols.
//
// Standard: fit once on normal-only training windows, score the test set
// once. Continual: pretrain on an origin dataset, then for each slice of the
// rearranged training stream update the scorer and evaluate a snapshot on the
// continual test set. Alongside the per-step reports each run produces a
// pretrain-only baseline and a conventional single fit on the whole stream.

#ifndef UCAL_RUNNER_HPP
#define UCAL_RUNNER_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucal/metrics.hpp"
#include "ucal/preprocess.hpp"
#include "ucal/rearrange.hpp"
#include "ucal/scorers.hpp"
#include "ucal/types.hpp"

namespace ucal {

struct Evaluation {
  ScoreSeries series;
  MetricReport report;
};

/// Scores every test window with `scorer` and reduces to frame metrics.
Evaluation evaluate(const Scorer& scorer, std::span<const PoseWindow> test_windows,
                    const CameraDataset& test, Aggregator aggregator);

struct ProtocolOptions {
  ScorerSpec scorer;
  PreprocessOptions preprocess;
  Aggregator aggregator = Aggregator::kMax;
};

struct StandardResult {
  std::string camera_id;
  Evaluation evaluation;
  std::size_t train_windows = 0;
  std::size_t test_windows = 0;
};

/// Single fit on split.train, single evaluation on split.test.
StandardResult run_standard(const SplitSet& split, const ProtocolOptions& options);

struct ContinualResult {
  std::string camera_id;
  MetricReport baseline;
  std::vector<MetricReport> per_step;
  MetricReport ucal_average;
  MetricReport ucal_best;
  MetricReport normal_training;

  friend bool operator==(const ContinualResult&, const ContinualResult&) = default;
};

/// Per-metric mean over steps.
MetricReport average_reports(std::span<const MetricReport> steps);
/// Per-metric best over steps: max AUCs, min error rates.
MetricReport best_reports(std::span<const MetricReport> steps);

struct ContinualOptions {
  ProtocolOptions protocol;
  RearrangePlan plan;
};

struct ContinualRun {
  ContinualResult result;
  ContinualSplit split;
  std::vector<ScoreSeries> step_series;
  /// Windows ingested during the continual steps, cumulative after step i.
  std::vector<std::size_t> cumulative_windows;
  /// Scorer::save() of the evaluated snapshot after each step.
  std::vector<std::string> checkpoints;
  std::size_t pretrain_windows = 0;
  /// Frame indices the scorer ever trained on from the target camera.
  std::vector<FrameIndex> trained_frames;
};

/// Windows of the normal frames of every origin camera.
std::vector<PoseWindow> origin_windows(std::span<const CameraDataset> origin,
                                       const PreprocessOptions& options);

/// Runs baseline, the k continual steps and normal training for one camera.
ContinualRun run_continual(std::span<const CameraDataset> origin,
                           const SplitSet& split, const ContinualOptions& options);

/// Re-evaluates per-step checkpoints against the continual test set.
std::vector<MetricReport> replay_checkpoints(std::span<const std::string> checkpoints,
                                             const ContinualSplit& split,
                                             const ProtocolOptions& options);

// ---------------------------------------------------------------------------
// File-driven runs.

enum class RunMode { kStandard, kContinual };

/// Everything a run needs. Loaded from JSON; CLI flags override fields.
struct RunConfig {
  RunMode mode = RunMode::kStandard;
  std::string camera;  // empty: every camera in the inputs
  ScorerSpec scorer;
  PreprocessOptions preprocess;
  Aggregator aggregator = Aggregator::kMax;
  std::optional<RearrangePlan> plan;  // required for continual runs
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::filesystem::path origin_path;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;

  /// Throws DataError on an inconsistent configuration.
  void validate() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Canonical JSON (sorted keys) used for hashing and the manifest. The
/// output directory is left out so relocating a run keeps its hash.
std::string run_config_json(const RunConfig& config);

/// Module seeds derived from the master seed.
ScorerSpec seeded_scorer(const RunConfig& config);
RearrangePlan seeded_plan(const RunConfig& config);

/// Standard protocol over every selected camera. Writes report.csv,
/// report.md and scores/<camera>.csv when out_dir is set.
std::vector<StandardResult> run_standard(const RunConfig& config);

/// Continual protocol for the selected camera. Writes report.csv, report.md,
/// steps/step_<i>.csv and checkpoints/step_<i>.ckpt when out_dir is set.
ContinualRun run_continual(const RunConfig& config);

/// Loads train/test files and picks one camera's split.
SplitSet load_split(const std::filesystem::path& train,
                    const std::filesystem::path& test, const std::string& camera);

/// manifest.json with tool_version, config_hash, seed, started_at, subcommand.
/// started_at honours SOURCE_DATE_EPOCH for reproducible trees.
void write_manifest(const std::filesystem::path& out_dir, std::string_view subcommand,
                    std::string_view config_json, std::uint64_t seed);

}  // namespace ucal

#endif  // UCAL_RUNNER_HPP
