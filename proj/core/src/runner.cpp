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

#include "ucal/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ucal/dataset_io.hpp"
#include "ucal/error.hpp"
#include "ucal/random.hpp"
#include "ucal/report.hpp"
#include "ucal/version.hpp"

namespace ucal {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<PoseWindow> windows_of(std::span<const FrameRecord> frames,
                                   const std::string& camera,
                                   const PreprocessOptions& options) {
  if (frames.empty()) return {};
  return prepare_windows(
      make_dataset(std::vector<FrameRecord>(frames.begin(), frames.end()), camera),
      options);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  return out;
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

RunConfig parse_config_json(const json& j, const fs::path& base) {
  RunConfig c;
  const std::string mode = j.value("mode", "standard");
  if (mode == "standard") {
    c.mode = RunMode::kStandard;
  } else if (mode == "continual") {
    c.mode = RunMode::kContinual;
  } else {
    throw DataError(fmt::format("config: unknown mode \"{}\"", mode));
  }
  c.camera = j.value("camera", "");
  c.seed = j.value("seed", std::uint64_t{0});
  c.train_path = resolve(base, j.value("train", ""));
  c.test_path = resolve(base, j.value("test", ""));
  c.origin_path = resolve(base, j.value("origin", ""));
  c.out_dir = resolve(base, j.value("out", ""));
  c.aggregator = parse_aggregator(j.value("aggregator", "max"));
  if (auto it = j.find("scorer"); it != j.end()) {
    c.scorer.type = it->value("type", c.scorer.type);
    c.scorer.knn_neighbors = it->value("neighbors", c.scorer.knn_neighbors);
    c.scorer.knn_capacity = it->value("capacity", c.scorer.knn_capacity);
    c.scorer.constant_value = it->value("value", c.scorer.constant_value);
  }
  if (auto it = j.find("preprocess"); it != j.end()) {
    c.preprocess.window_length = it->value("window_length", c.preprocess.window_length);
    c.preprocess.stride = it->value("stride", c.preprocess.stride);
    c.preprocess.max_gap = it->value("max_gap", c.preprocess.max_gap);
    c.preprocess.smooth_window = it->value("smooth_window", c.preprocess.smooth_window);
  }
  if (auto it = j.find("rearrange"); it != j.end() && !it->is_null()) {
    RearrangePlan plan;
    plan.k = it->value("k", plan.k);
    plan.target_train_anomaly_ratio =
        it->value("target_train_anomaly_ratio", plan.target_train_anomaly_ratio);
    plan.balance_tolerance = it->value("balance_tolerance", plan.balance_tolerance);
    if (auto ic = it->find("inject_count"); ic != it->end() && !ic->is_null()) {
      plan.inject_count = ic->get<std::size_t>();
    }
    c.plan = plan;
  }
  return c;
}

}  // namespace

Evaluation evaluate(const Scorer& scorer, std::span<const PoseWindow> test_windows,
                    const CameraDataset& test, Aggregator aggregator) {
  std::vector<WindowScore> scores;
  scores.reserve(test_windows.size());
  for (const PoseWindow& w : test_windows) {
    scores.push_back({w.covered_frames, scorer.score(w)});
  }
  Evaluation e;
  e.series = aggregate_frame_scores(scores, test, aggregator);
  e.report = compute_all(e.series);
  return e;
}

StandardResult run_standard(const SplitSet& split, const ProtocolOptions& options) {
  if (split.train.empty()) throw DataError("standard run: empty training set");
  if (split.test.empty()) throw DataError("standard run: empty test set");
  validate_standard_split(split);

  const auto train_windows = prepare_windows(split.train, options.preprocess);
  if (train_windows.empty()) throw DataError("standard run: training set yields no windows");
  auto scorer = make_scorer(options.scorer);
  scorer->fit(train_windows);

  const auto test_windows = prepare_windows(split.test, options.preprocess);
  StandardResult result;
  result.camera_id = split.test.camera_id;
  result.evaluation = evaluate(*scorer, test_windows, split.test, options.aggregator);
  result.train_windows = train_windows.size();
  result.test_windows = test_windows.size();
  return result;
}

MetricReport average_reports(std::span<const MetricReport> steps) {
  if (steps.empty()) throw DataError("no steps to average");
  MetricReport avg;
  for (const MetricReport& r : steps) {
    avg.auc_roc += r.auc_roc;
    avg.auc_pr += r.auc_pr;
    avg.eer += r.eer;
    avg.ten_er += r.ten_er;
  }
  const double n = static_cast<double>(steps.size());
  avg.auc_roc /= n;
  avg.auc_pr /= n;
  avg.eer /= n;
  avg.ten_er /= n;
  avg.n_pos = steps.front().n_pos;
  avg.n_neg = steps.front().n_neg;
  return avg;
}

MetricReport best_reports(std::span<const MetricReport> steps) {
  if (steps.empty()) throw DataError("no steps to summarize");
  MetricReport best = steps.front();
  for (const MetricReport& r : steps.subspan(1)) {
    best.auc_roc = std::max(best.auc_roc, r.auc_roc);
    best.auc_pr = std::max(best.auc_pr, r.auc_pr);
    best.eer = std::min(best.eer, r.eer);
    best.ten_er = std::min(best.ten_er, r.ten_er);
  }
  return best;
}

std::vector<PoseWindow> origin_windows(std::span<const CameraDataset> origin,
                                       const PreprocessOptions& options) {
  std::vector<PoseWindow> windows;
  for (const CameraDataset& camera : origin) {
    CameraDataset normals;
    normals.camera_id = camera.camera_id;
    std::copy_if(camera.frames.begin(), camera.frames.end(),
                 std::back_inserter(normals.frames),
                 [](const FrameRecord& f) { return f.label == Label::kNormal; });
    auto part = prepare_windows(normals, options);
    std::move(part.begin(), part.end(), std::back_inserter(windows));
  }
  return windows;
}

ContinualRun run_continual(std::span<const CameraDataset> origin,
                           const SplitSet& split, const ContinualOptions& options) {
  const ProtocolOptions& proto = options.protocol;
  ContinualRun run;
  run.split = rearrange(split, options.plan);
  verify(run.split);
  const ContinualSplit& cs = run.split;
  const std::string camera = cs.test.camera_id;
  run.result.camera_id = camera;

  const auto test_windows = prepare_windows(cs.test, proto.preprocess);

  // Baseline: origin only.
  const auto pretrain = origin_windows(origin, proto.preprocess);
  if (pretrain.empty()) throw DataError("continual run: origin data yields no windows");
  auto pretrained = make_scorer(proto.scorer);
  pretrained->fit(pretrain);
  run.pretrain_windows = pretrained->windows_seen();
  run.result.baseline = evaluate(*pretrained, test_windows, cs.test, proto.aggregator).report;

  // Continual steps. Slices are ingested unlabeled; evaluation always runs
  // on a snapshot so it cannot disturb the live state.
  std::unordered_set<FrameIndex> test_ids;
  for (const FrameRecord& f : cs.test.frames) test_ids.insert(f.frame_index);
  auto live = pretrained->snapshot();
  std::size_t ingested = 0;
  for (std::size_t i = 0; i < cs.slice_count(); ++i) {
    const auto slice = cs.slice(i);
    for (const FrameRecord& f : slice) {
      if (test_ids.contains(f.frame_index)) {
        throw Error(fmt::format("test frame {} reached training", f.frame_index));
      }
      run.trained_frames.push_back(f.frame_index);
    }
    const auto windows = windows_of(slice, camera, proto.preprocess);
    live->partial_fit(windows);
    ingested += windows.size();
    if (live->windows_seen() != run.pretrain_windows + ingested) {
      throw Error("scorer window bookkeeping out of step");
    }
    run.cumulative_windows.push_back(ingested);

    const auto snap = live->snapshot();
    Evaluation e = evaluate(*snap, test_windows, cs.test, proto.aggregator);
    run.result.per_step.push_back(e.report);
    run.step_series.push_back(std::move(e.series));
    run.checkpoints.push_back(snap->save());
  }
  run.result.ucal_average = average_reports(run.result.per_step);
  run.result.ucal_best = best_reports(run.result.per_step);

  // Normal training: a fresh scorer fit once on the whole stream.
  auto fresh = make_scorer(proto.scorer);
  fresh->fit(windows_of(cs.train_stream, camera, proto.preprocess));
  run.result.normal_training = evaluate(*fresh, test_windows, cs.test, proto.aggregator).report;
  return run;
}

std::vector<MetricReport> replay_checkpoints(std::span<const std::string> checkpoints,
                                             const ContinualSplit& split,
                                             const ProtocolOptions& options) {
  const auto test_windows = prepare_windows(split.test, options.preprocess);
  std::vector<MetricReport> reports;
  for (const std::string& text : checkpoints) {
    const auto scorer = load_checkpoint(text);
    reports.push_back(evaluate(*scorer, test_windows, split.test, options.aggregator).report);
  }
  return reports;
}

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  if (preprocess.window_length < 2) throw DataError("config: window length must be at least 2");
  if (preprocess.stride < 1) throw DataError("config: stride must be at least 1");
  if (preprocess.smooth_window % 2 == 0) {
    throw DataError("config: smoothing window must be odd");
  }
  if (train_path.empty() || test_path.empty()) {
    throw DataError("config: train and test paths are required");
  }
  if (mode == RunMode::kContinual) {
    if (!plan) throw DataError("config: continual mode needs a rearrange plan");
    plan->validate();
    if (origin_path.empty()) throw DataError("config: continual mode needs an origin dataset");
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  try {
    return parse_config_json(json::parse(json_text), {});
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  try {
    return parse_config_json(json::parse(in), path.parent_path());
  } catch (const json::exception& e) {
    throw DataError(fmt::format("config {}: {}", path.string(), e.what()));
  }
}

std::string run_config_json(const RunConfig& c) {
  json j;
  j["mode"] = c.mode == RunMode::kStandard ? "standard" : "continual";
  j["camera"] = c.camera;
  j["seed"] = c.seed;
  j["train"] = c.train_path.string();
  j["test"] = c.test_path.string();
  j["origin"] = c.origin_path.string();
  j["aggregator"] = std::string(to_string(c.aggregator));
  j["scorer"] = {{"type", c.scorer.type},
                 {"neighbors", c.scorer.knn_neighbors},
                 {"capacity", c.scorer.knn_capacity},
                 {"value", c.scorer.constant_value}};
  j["preprocess"] = {{"window_length", c.preprocess.window_length},
                     {"stride", c.preprocess.stride},
                     {"max_gap", c.preprocess.max_gap},
                     {"smooth_window", c.preprocess.smooth_window}};
  if (c.plan) {
    j["rearrange"] = {{"k", c.plan->k},
                      {"target_train_anomaly_ratio", c.plan->target_train_anomaly_ratio},
                      {"balance_tolerance", c.plan->balance_tolerance},
                      {"inject_count", c.plan->inject_count ? json(*c.plan->inject_count)
                                                            : json(nullptr)}};
  } else {
    j["rearrange"] = nullptr;
  }
  return j.dump();
}

ScorerSpec seeded_scorer(const RunConfig& config) {
  ScorerSpec spec = config.scorer;
  spec.seed = derive_seed(config.seed, "scorer");
  return spec;
}

RearrangePlan seeded_plan(const RunConfig& config) {
  RearrangePlan plan = config.plan.value_or(RearrangePlan{});
  plan.seed = derive_seed(config.seed, "rearrange");
  return plan;
}

SplitSet load_split(const fs::path& train, const fs::path& test,
                    const std::string& camera) {
  auto train_cams = load_cameras(train);
  auto test_cams = load_cameras(test);
  std::string id = camera;
  if (id.empty()) {
    if (test_cams.size() != 1) {
      throw DataError(fmt::format("{} holds {} cameras; select one with --camera",
                                  test.string(), test_cams.size()));
    }
    id = test_cams.begin()->first;
  }
  auto tr = train_cams.find(id);
  auto te = test_cams.find(id);
  if (tr == train_cams.end()) throw DataError(fmt::format("camera {} not in {}", id, train.string()));
  if (te == test_cams.end()) throw DataError(fmt::format("camera {} not in {}", id, test.string()));
  return SplitSet{std::move(tr->second), std::move(te->second)};
}

std::vector<StandardResult> run_standard(const RunConfig& config) {
  config.validate();
  ProtocolOptions options{seeded_scorer(config), config.preprocess, config.aggregator};

  std::vector<std::string> cameras;
  if (config.camera.empty()) {
    for (const auto& [id, _] : load_cameras(config.test_path)) cameras.push_back(id);
  } else {
    cameras.push_back(config.camera);
  }
  std::vector<StandardResult> results;
  for (const std::string& id : cameras) {
    results.push_back(run_standard(load_split(config.train_path, config.test_path, id), options));
  }

  if (!config.out_dir.empty()) {
    make_dirs(config.out_dir / "scores");
    auto csv = open_out(config.out_dir / "report.csv");
    write_standard_csv(csv, results);
    auto md = open_out(config.out_dir / "report.md");
    write_standard_markdown(md, results);
    for (const StandardResult& r : results) {
      auto scores = open_out(config.out_dir / "scores" / (r.camera_id + ".csv"));
      write_score_series_csv(scores, r.evaluation.series);
    }
    write_manifest(config.out_dir, "run-standard", run_config_json(config), config.seed);
  }
  return results;
}

ContinualRun run_continual(const RunConfig& config) {
  config.validate();
  if (config.mode != RunMode::kContinual) throw DataError("config: mode is not continual");
  ContinualOptions options{{seeded_scorer(config), config.preprocess, config.aggregator},
                           seeded_plan(config)};
  const SplitSet split = load_split(config.train_path, config.test_path, config.camera);
  std::vector<CameraDataset> origin;
  for (auto& [id, ds] : load_cameras(config.origin_path)) origin.push_back(std::move(ds));

  ContinualRun run = run_continual(origin, split, options);

  if (!config.out_dir.empty()) {
    const fs::path& out = config.out_dir;
    make_dirs(out / "steps");
    make_dirs(out / "checkpoints");
    const std::vector<ContinualResult> results{run.result};
    auto csv = open_out(out / "report.csv");
    write_continual_csv(csv, results);
    auto md = open_out(out / "report.md");
    write_continual_markdown(md, results);
    for (std::size_t i = 0; i < run.step_series.size(); ++i) {
      auto step = open_out(out / "steps" / fmt::format("step_{}.csv", i + 1));
      write_score_series_csv(step, run.step_series[i]);
      auto ckpt = open_out(out / "checkpoints" / fmt::format("step_{}.ckpt", i + 1));
      ckpt << run.checkpoints[i] << '\n';
    }
    write_manifest(out, "run-continual", run_config_json(config), config.seed);
  }
  return run;
}

void write_manifest(const fs::path& out_dir, std::string_view subcommand,
                    std::string_view config_json, std::uint64_t seed) {
  make_dirs(out_dir);
  json m{{"tool_version", kToolVersion},
         {"config_hash", fmt::format("{:016x}", fnv1a64(config_json))},
         {"seed", seed},
         {"started_at", utc_timestamp()},
         {"subcommand", subcommand}};
  auto out = open_out(out_dir / "manifest.json");
  out << m.dump(2) << '\n';
}

}  // namespace ucal
