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


// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and time limits are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "golden_inputs.hpp"
#include "oracles.hpp"
#include "ucal/error.hpp"
#include "ucal/metrics.hpp"
#include "ucal/preprocess.hpp"
#include "ucal/rearrange.hpp"
#include "ucal/report.hpp"
#include "ucal/runner.hpp"
#include "ucal/scorers.hpp"
#include "ucal/synthetic.hpp"

namespace ucal {
namespace {

namespace fs = std::filesystem;

constexpr double kMetricTol = 1e-9;
constexpr double kApTol = 1e-6;
constexpr double kFixtureApTol = 1e-4;
constexpr double kWelfordMeanTol = 1e-9;
constexpr double kWelfordVarTol = 1e-6;
constexpr double kSummaryTol = 1e-9;
constexpr double kMetricsBudgetSec = 30.0;
constexpr double kRearrangeBudgetSec = 60.0;
constexpr double kEp1BudgetSec = 120.0;

// Collects the first failure; later checks are skipped once one fails.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  void near(double got, double want, double tol, const std::string& what) {
    expect(std::abs(got - want) <= tol, fmt::format("{}: got {}, want {} +- {}", what, got, want, tol));
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }
  std::string detail;

 private:
  std::string failure_;
};

using Criterion = std::function<void(Check&)>;

std::set<FrameIndex> ids_of(std::span<const FrameRecord> a, std::span<const FrameRecord> b) {
  std::set<FrameIndex> ids;
  for (const auto& f : a) ids.insert(f.frame_index);
  for (const auto& f : b) ids.insert(f.frame_index);
  return ids;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void metric_oracles(Check& c) {
  for (std::uint64_t seed = 0; seed < 1000 && c.ok(); ++seed) {
    Rng rng(derive_seed(seed, "acceptance-metrics"));
    const std::size_t n = 2 + rng.uniform_index(49);
    const ScoreSeries s = oracle::random_series(rng, n, 1 + rng.uniform_index(12));
    const MetricReport r = compute_all(s);
    const std::string at = fmt::format("seed {}", seed);
    c.near(r.auc_roc, oracle::auc_roc(s), kMetricTol, at + " AUC-ROC");
    c.near(r.auc_pr, oracle::auc_pr(s), kApTol, at + " AUC-PR");
    c.near(r.eer, oracle::eer(s), kMetricTol, at + " EER");
    c.near(r.ten_er, oracle::fpr_at_fnr(s, 0.10), kMetricTol, at + " 10ER");
  }
  c.detail = "1000 series";
}

void metric_fixture(Check& c) {
  ScoreSeries s;
  s.entries = {{0, 0.9, Label::kAnomalous},
               {1, 0.8, Label::kNormal},
               {2, 0.7, Label::kAnomalous},
               {3, 0.6, Label::kNormal}};
  const MetricReport r = compute_all(s);
  c.expect(r.auc_roc == 0.75, fmt::format("AUC-ROC {}", r.auc_roc));
  c.near(r.auc_pr, 5.0 / 6.0, kFixtureApTol, "AUC-PR");
  c.expect(r.eer == 0.5, fmt::format("EER {}", r.eer));
  c.expect(r.ten_er == 0.5, fmt::format("10ER {}", r.ten_er));
  c.detail = fmt::format("{:.4f} {:.4f} {:.4f} {:.4f}", r.auc_roc, r.auc_pr, r.eer, r.ten_er);
}

void rearrange_c0(Check& c) {
  const SplitSet split = oracle::c0_split();
  RearrangePlan plan;
  plan.inject_count = 4615;
  const ContinualSplit cs = rearrange(split, plan);
  const ContinualStats st = verify(cs);
  const std::size_t test_normals = st.test.frame_count - st.test.anomaly_frame_count;
  c.expect(st.train.frame_count == 487835, fmt::format("train total {}", st.train.frame_count));
  c.near(st.train.anomaly_fraction * 100.0, 0.95, 0.005, "train anomaly %");
  c.expect(test_normals == 26093, fmt::format("test normals {}", test_normals));
  c.expect(st.test.anomaly_frame_count == 26052,
           fmt::format("test anomalies {}", st.test.anomaly_frame_count));
  c.near(st.test.anomaly_fraction * 100.0, 49.96, 0.05, "test balance %");
  const std::size_t total = cs.train_stream.size() + cs.test.frames.size();
  const auto ids = ids_of(cs.train_stream, cs.test.frames);
  c.expect(ids.size() == total, "train stream and test set overlap");
  c.expect(ids == ids_of(split.train.frames, split.test.frames), "frames not conserved");
  c.detail = fmt::format("train {} ({:.4f}% anomalous), test {}/{} ({:.2f}%)",
                         st.train.frame_count, st.train.anomaly_fraction * 100.0, test_normals,
                         st.test.anomaly_frame_count, st.test.anomaly_fraction * 100.0);
}

void rearrange_invariants(Check& c) {
  for (std::uint64_t seed = 0; seed < 100 && c.ok(); ++seed) {
    Rng rng(derive_seed(seed, "acceptance-split"));
    const SplitSet split = oracle::random_split(rng);
    RearrangePlan plan;
    plan.seed = derive_seed(seed, "plan");
    plan.k = 1 + rng.uniform_index(12);
    const ContinualSplit cs = rearrange(split, plan);
    const std::string at = fmt::format("seed {}", seed);
    try {
      verify(cs);
    } catch (const Error& e) {
      c.expect(false, at + ": " + e.what());
      return;
    }
    std::size_t injected = 0;
    for (const auto& f : cs.train_stream) injected += f.label == Label::kAnomalous;
    c.expect(static_cast<double>(injected) < 0.01 * static_cast<double>(cs.train_stream.size()),
             at + ": anomaly cap");
    const std::size_t an = count_label(cs.test.frames, Label::kAnomalous);
    const std::size_t no = cs.test.frames.size() - an;
    c.expect(is_balanced(no, an, plan.balance_tolerance), at + ": test balance");
    c.expect(cs.slice_count() == plan.k, at + ": slice count");
    std::size_t covered = 0;
    for (std::size_t i = 0; i < cs.slice_count(); ++i) {
      c.expect(cs.slice(i).data() == cs.train_stream.data() + covered, at + ": slice gap");
      covered += cs.slice(i).size();
    }
    c.expect(covered == cs.train_stream.size(), at + ": slices do not cover the stream");
    const std::size_t total = cs.train_stream.size() + cs.test.frames.size();
    const auto ids = ids_of(cs.train_stream, cs.test.frames);
    c.expect(ids.size() == total && total == split.train.frames.size() + split.test.frames.size() &&
                 ids == ids_of(split.train.frames, split.test.frames),
             at + ": multiset conservation");
    const ContinualSplit again = rearrange(split, plan);
    c.expect(again.train_stream == cs.train_stream && again.test == cs.test &&
                 again.train_origin == cs.train_origin,
             at + ": not deterministic");
  }
  c.detail = "100 splits";
}

PersonObservation flat_pose(double x, double y) {
  PersonObservation p;
  p.bbox = {x - 10, y - 20, x + 10, y + 20};
  for (auto& k : p.keypoints) k = {x, y, 0.8};
  return p;
}

void preprocessing(Check& c) {
  Rng rng(derive_seed(0, "acceptance-preprocess"));
  for (int trial = 0; trial < 200 && c.ok(); ++trial) {
    const std::size_t gap = 1 + rng.uniform_index(14);
    PersonObservation a = oracle::random_person(rng, 1);
    PersonObservation b = oracle::random_person(rng, 1);
    a.interpolated = b.interpolated = false;
    const FrameIndex f0 = rng.uniform_index(1000);
    const FrameIndex f1 = f0 + gap + 1;
    Track t;
    t.track_id = 1;
    t.points = {{f0, a}, {f1, b}};
    const Track out = interpolate_track(t, 14);
    c.expect(out.size() == gap + 2, "interpolated track length");
    if (!c.ok()) return;
    for (std::size_t i = 1; i <= gap; ++i) {
      const double w = static_cast<double>(i) / static_cast<double>(gap + 1);
      for (std::size_t k = 0; k < kNumKeypoints; ++k) {
        const Keypoint& got = out.points[i].observation.keypoints[k];
        c.near(got.x, a.keypoints[k].x + w * (b.keypoints[k].x - a.keypoints[k].x), kMetricTol,
               "interpolated x");
        c.near(got.y, a.keypoints[k].y + w * (b.keypoints[k].y - a.keypoints[k].y), kMetricTol,
               "interpolated y");
        c.expect(!got.visibility.has_value(), "interpolated keypoint kept a visibility");
      }
    }
  }

  Track impulse;
  for (FrameIndex f = 0; f < 31; ++f) impulse.points.push_back({f, flat_pose(0, 0)});
  for (auto& k : impulse.points[15].observation.keypoints) k.x = 1.0;
  const double center = smooth_track(impulse, 15).points[15].observation.keypoints[0].x;
  c.near(center, 1.0 / 15.0, 1e-12, "impulse response");

  for (int trial = 0; trial < 1000 && c.ok(); ++trial) {
    const std::size_t n = rng.uniform_index(120);
    const std::size_t len = 1 + rng.uniform_index(40);
    const std::size_t stride = 1 + rng.uniform_index(12);
    std::size_t brute = 0;
    for (std::size_t s = 0; s + len <= n; s += stride) ++brute;
    Track run;
    for (FrameIndex f = 0; f < n; ++f) run.points.push_back({f, flat_pose(100, 100)});
    c.expect(window_count(n, len, stride) == brute && window_track(run, len, stride).size() == brute,
             fmt::format("window count n={} length={} stride={}", n, len, stride));
  }
  c.detail = fmt::format("impulse center {:.6f}, 1000 window triples", center);
}

void welford(Check& c) {
  using Gaussian = GaussianKinematicScorer;
  for (std::uint64_t trial = 0; trial < 100 && c.ok(); ++trial) {
    Rng rng(derive_seed(trial, "acceptance-welford"));
    std::vector<Gaussian::FeatureVector> data(2 + rng.uniform_index(300));
    for (auto& v : data) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = 5.0 * rng.normal() + static_cast<double>(i);
    }
    Gaussian whole;
    whole.partial_fit_features(data);
    Gaussian parts;
    for (std::size_t at = 0; at < data.size();) {
      const std::size_t len = std::min(data.size() - at, 1 + rng.uniform_index(50));
      parts.partial_fit_features(std::span<const Gaussian::FeatureVector>(data).subspan(at, len));
      at += len;
    }
    const auto vw = whole.variance();
    const auto vp = parts.variance();
    for (std::size_t i = 0; i < Gaussian::kFeatureCount; ++i) {
      c.near(parts.mean()[i], whole.mean()[i], kWelfordMeanTol, fmt::format("trial {} mean", trial));
      c.near(vp[i], vw[i], kWelfordVarTol, fmt::format("trial {} variance", trial));
    }
  }
  c.detail = "100 trials";
}

void end_to_end_standard(Check& c) {
  SyntheticSpec spec;
  spec.seed = 0;
  spec.normal_frames = 5000;
  spec.anomalous_frames = 500;
  const StandardResult r = run_standard(generate_synthetic(spec), ProtocolOptions{});
  const MetricReport& m = r.evaluation.report;
  c.expect(m.auc_roc >= 0.95, fmt::format("AUC-ROC {}", m.auc_roc));
  c.expect(m.ten_er <= 0.2, fmt::format("10ER {}", m.ten_er));
  c.detail = fmt::format("AUC-ROC {:.4f}, 10ER {:.4f}", m.auc_roc, m.ten_er);
}

struct ShiftOutput {
  ContinualRun run;
  std::string csv;
  std::string markdown;
};

ShiftOutput shift_once() {
  const ShiftScenario sc = generate_shift_scenario(0);
  ContinualOptions opt;
  opt.plan.k = 9;
  opt.plan.seed = derive_seed(0, "rearrange");
  opt.protocol.scorer.seed = derive_seed(0, "scorer");
  const std::vector<CameraDataset> origin{sc.origin};
  ShiftOutput out{run_continual(origin, sc.target, opt), {}, {}};
  const std::vector<ContinualResult> results{out.run.result};
  std::ostringstream csv;
  std::ostringstream md;
  write_continual_csv(csv, results);
  write_continual_markdown(md, results);
  out.csv = csv.str();
  out.markdown = md.str();
  return out;
}

void end_to_end_continual(Check& c) {
  const ShiftOutput a = shift_once();
  const ContinualResult& r = a.run.result;
  c.expect(r.per_step.size() == 9, fmt::format("{} step reports", r.per_step.size()));
  if (!c.ok()) return;
  MetricReport sum{};
  MetricReport best = r.per_step.front();
  for (const MetricReport& m : r.per_step) {
    sum.auc_roc += m.auc_roc;
    sum.auc_pr += m.auc_pr;
    sum.eer += m.eer;
    sum.ten_er += m.ten_er;
    best.auc_roc = std::max(best.auc_roc, m.auc_roc);
    best.auc_pr = std::max(best.auc_pr, m.auc_pr);
    best.eer = std::min(best.eer, m.eer);
    best.ten_er = std::min(best.ten_er, m.ten_er);
  }
  c.near(r.ucal_average.auc_roc, sum.auc_roc / 9.0, kSummaryTol, "average AUC-ROC");
  c.near(r.ucal_average.auc_pr, sum.auc_pr / 9.0, kSummaryTol, "average AUC-PR");
  c.near(r.ucal_average.eer, sum.eer / 9.0, kSummaryTol, "average EER");
  c.near(r.ucal_average.ten_er, sum.ten_er / 9.0, kSummaryTol, "average 10ER");
  c.near(r.ucal_best.auc_roc, best.auc_roc, kSummaryTol, "best AUC-ROC");
  c.near(r.ucal_best.auc_pr, best.auc_pr, kSummaryTol, "best AUC-PR");
  c.near(r.ucal_best.eer, best.eer, kSummaryTol, "best EER");
  c.near(r.ucal_best.ten_er, best.ten_er, kSummaryTol, "best 10ER");
  c.expect(r.per_step.back().auc_roc > r.baseline.auc_roc,
           fmt::format("final step {} not above baseline {}", r.per_step.back().auc_roc,
                       r.baseline.auc_roc));
  const ShiftOutput b = shift_once();
  c.expect(a.csv == b.csv, "rerun CSV differs");
  c.expect(a.markdown == b.markdown, "rerun markdown differs");
  c.detail = fmt::format("baseline {:.4f}, step 9 {:.4f}, average {:.4f}, best {:.4f}",
                         r.baseline.auc_roc, r.per_step.back().auc_roc, r.ucal_average.auc_roc,
                         r.ucal_best.auc_roc);
}

void report_layout(Check& c) {
  const fs::path dir(UCAL_GOLDEN_DIR);
  std::ostringstream cont;
  const std::vector<ContinualResult> cr{golden::continual_c0()};
  write_continual_markdown(cont, cr);
  c.expect(cont.str() == read_file(dir / "continual_c0.md"), "continual markdown differs from golden");
  std::ostringstream stdr;
  const std::vector<StandardResult> sr{golden::standard_c0()};
  write_standard_markdown(stdr, sr);
  c.expect(stdr.str() == read_file(dir / "standard_c0.md"), "standard markdown differs from golden");
  c.detail =
      "layout only; published deep-model scores (e.g. MPED-RNN C0 AUC-ROC 79.57) are not "
      "reproducible here, their datasets and models are out of scope";
}

struct Entry {
  int id;
  const char* name;
  Criterion run;
  double budget_sec;  // 0: no limit
};

}  // namespace
}  // namespace ucal

int main() {
  using namespace ucal;
  const std::vector<Entry> entries = {
      {1, "metric oracle equivalence", metric_oracles, kMetricsBudgetSec},
      {2, "metric fixture", metric_fixture, 0.0},
      {3, "C0 rearrangement fixture", rearrange_c0, kRearrangeBudgetSec},
      {4, "rearrangement invariants", rearrange_invariants, 0.0},
      {5, "preprocessing properties", preprocessing, 0.0},
      {6, "Welford consistency", welford, 0.0},
      {7, "end-to-end standard protocol", end_to_end_standard, kEp1BudgetSec},
      {8, "end-to-end continual protocol", end_to_end_continual, 0.0},
      {9, "report layout vs golden files", report_layout, 0.0},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.expect(false, std::string("exception: ") + ex.what());
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.budget_sec > 0.0) {
      c.expect(sec < e.budget_sec, fmt::format("took {:.1f}s, limit {:.0f}s", sec, e.budget_sec));
    }
    failed += !c.ok();
    fmt::print("{} criterion {}: {} ({:.2f}s) {}\n", c.ok() ? "PASS" : "FAIL", e.id, e.name, sec,
               c.ok() ? c.detail : c.failure());
  }
  fmt::print("{} of {} criteria passed\n", entries.size() - failed, entries.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
