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

#include "ucal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ucal/error.hpp"

namespace ucal {
namespace {

// Cumulative counts after flagging every score >= some threshold. The first
// point is (0, 0): nothing flagged.
struct OperatingPoint {
  std::size_t tp = 0;
  std::size_t fp = 0;
};

struct Curve {
  std::vector<OperatingPoint> points;
  std::size_t pos = 0;
  std::size_t neg = 0;
};

void check_series(const ScoreSeries& series) {
  std::vector<FrameIndex> ids;
  ids.reserve(series.entries.size());
  for (const ScoredFrame& e : series.entries) {
    if (!std::isfinite(e.score)) {
      throw DataError(fmt::format("frame {}: non-finite score", e.frame_index));
    }
    ids.push_back(e.frame_index);
  }
  std::sort(ids.begin(), ids.end());
  if (auto it = std::adjacent_find(ids.begin(), ids.end()); it != ids.end()) {
    throw DataError(fmt::format("frame {}: duplicate entry in score series", *it));
  }
}

Curve build_curve(const ScoreSeries& series) {
  check_series(series);
  std::vector<std::pair<double, bool>> sorted;
  sorted.reserve(series.entries.size());
  Curve curve;
  for (const ScoredFrame& e : series.entries) {
    const bool positive = e.label == Label::kAnomalous;
    sorted.emplace_back(e.score, positive);
    (positive ? curve.pos : curve.neg) += 1;
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  curve.points.reserve(sorted.size() + 1);
  curve.points.push_back({});
  OperatingPoint acc;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    (sorted[i].second ? acc.tp : acc.fp) += 1;
    if (i + 1 == sorted.size() || sorted[i + 1].first != sorted[i].first) {
      curve.points.push_back(acc);
    }
  }
  return curve;
}

void require_both(const Curve& c, std::string_view metric) {
  if (c.pos == 0 || c.neg == 0) {
    throw DataError(fmt::format("{} needs both normal and anomalous frames", metric));
  }
}

double area_roc(const Curve& c) {
  double twice_area = 0.0;  // in units of (1/neg) * (1/pos)
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const auto& a = c.points[i - 1];
    const auto& b = c.points[i];
    twice_area += static_cast<double>(b.fp - a.fp) * static_cast<double>(a.tp + b.tp);
  }
  return twice_area / (2.0 * static_cast<double>(c.pos) * static_cast<double>(c.neg));
}

double average_precision(const Curve& c) {
  double ap = 0.0;
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const auto& a = c.points[i - 1];
    const auto& b = c.points[i];
    if (b.tp == a.tp) continue;
    const double recall_step =
        static_cast<double>(b.tp - a.tp) / static_cast<double>(c.pos);
    const double precision =
        static_cast<double>(b.tp) / static_cast<double>(b.tp + b.fp);
    ap += recall_step * precision;
  }
  return ap;
}

constexpr double kTieEps = 1e-12;

double equal_error(const Curve& c) {
  double best_gap = std::numeric_limits<double>::infinity();
  double best = 1.0;
  for (const auto& p : c.points) {
    const double fpr = static_cast<double>(p.fp) / static_cast<double>(c.neg);
    const double fnr = static_cast<double>(c.pos - p.tp) / static_cast<double>(c.pos);
    const double gap = std::abs(fpr - fnr);
    const double mid = 0.5 * (fpr + fnr);
    // Gaps equal up to rounding count as ties; the lower midpoint wins.
    if (gap < best_gap - kTieEps) {
      best_gap = gap;
      best = mid;
    } else if (gap <= best_gap + kTieEps && mid < best) {
      best = mid;
    }
  }
  return best;
}

double min_fpr_within_fnr(const Curve& c, double target_fnr) {
  double best = 1.0;
  for (const auto& p : c.points) {
    const double fnr = static_cast<double>(c.pos - p.tp) / static_cast<double>(c.pos);
    if (fnr <= target_fnr) {
      best = std::min(best, static_cast<double>(p.fp) / static_cast<double>(c.neg));
    }
  }
  return best;
}

}  // namespace

std::size_t ScoreSeries::positives() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(),
      [](const ScoredFrame& e) { return e.label == Label::kAnomalous; }));
}

std::size_t ScoreSeries::negatives() const { return entries.size() - positives(); }

std::string_view to_string(Aggregator aggregator) {
  return aggregator == Aggregator::kMax ? "max" : "mean";
}

Aggregator parse_aggregator(std::string_view text) {
  if (text == "max") return Aggregator::kMax;
  if (text == "mean") return Aggregator::kMean;
  throw DataError(fmt::format("unknown aggregator \"{}\" (max|mean)", text));
}

ScoreSeries aggregate_frame_scores(std::span<const WindowScore> window_scores,
                                   const CameraDataset& frames,
                                   Aggregator aggregator) {
  if (frames.empty()) throw DataError("aggregate_frame_scores: empty dataset");
  const std::size_t n = frames.size();
  std::vector<double> acc(n, 0.0);
  std::vector<std::size_t> hits(n, 0);
  double min_score = std::numeric_limits<double>::infinity();

  const auto position = [&](FrameIndex f) -> std::ptrdiff_t {
    auto it = std::lower_bound(
        frames.frames.begin(), frames.frames.end(), f,
        [](const FrameRecord& r, FrameIndex v) { return r.frame_index < v; });
    if (it == frames.frames.end() || it->frame_index != f) return -1;
    return it - frames.frames.begin();
  };

  for (const WindowScore& w : window_scores) {
    if (!std::isfinite(w.score)) throw DataError("aggregate_frame_scores: non-finite window score");
    min_score = std::min(min_score, w.score);
    for (FrameIndex f : w.covered_frames) {
      const std::ptrdiff_t i = position(f);
      if (i < 0) continue;
      const auto u = static_cast<std::size_t>(i);
      if (aggregator == Aggregator::kMax) {
        acc[u] = hits[u] == 0 ? w.score : std::max(acc[u], w.score);
      } else {
        acc[u] += w.score;
      }
      ++hits[u];
    }
  }
  if (!std::isfinite(min_score)) min_score = 0.0;

  ScoreSeries series;
  series.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double score = min_score;
    if (hits[i] > 0) {
      score = aggregator == Aggregator::kMax
                  ? acc[i]
                  : acc[i] / static_cast<double>(hits[i]);
    }
    series.entries.push_back(
        {frames.frames[i].frame_index, score, frames.frames[i].label});
  }
  return series;
}

double auc_roc(const ScoreSeries& series) {
  const Curve c = build_curve(series);
  require_both(c, "AUC-ROC");
  return area_roc(c);
}

double auc_pr(const ScoreSeries& series) {
  const Curve c = build_curve(series);
  if (c.pos == 0) throw DataError("AUC-PR needs at least one anomalous frame");
  return average_precision(c);
}

double eer(const ScoreSeries& series) {
  const Curve c = build_curve(series);
  require_both(c, "EER");
  return equal_error(c);
}

double fpr_at_fnr(const ScoreSeries& series, double target_fnr) {
  if (!(target_fnr >= 0.0 && target_fnr < 1.0)) {
    throw DataError("target FNR must lie in [0, 1)");
  }
  const Curve c = build_curve(series);
  require_both(c, "FPR at fixed FNR");
  return min_fpr_within_fnr(c, target_fnr);
}

MetricReport compute_all(const ScoreSeries& series) {
  const Curve c = build_curve(series);
  require_both(c, "metric report");
  return {area_roc(c),        average_precision(c),
          equal_error(c),     min_fpr_within_fnr(c, 0.10),
          c.pos,              c.neg};
}

void write_metric_csv_header(std::ostream& os) {
  os << "camera_id,context,auc_roc,auc_pr,eer,ten_er,n_pos,n_neg\n";
}

void write_metric_csv_row(std::ostream& os, std::string_view camera_id,
                          std::string_view context, const MetricReport& r) {
  // Shortest round-trip representation keeps the CSV lossless.
  fmt::print(os, "{},{},{},{},{},{},{},{}\n", camera_id, context, r.auc_roc,
             r.auc_pr, r.eer, r.ten_er, r.n_pos, r.n_neg);
}

void write_score_series_csv(std::ostream& os, const ScoreSeries& series) {
  os << "frame_index,score,label\n";
  for (const ScoredFrame& e : series.entries) {
    fmt::print(os, "{},{},{}\n", e.frame_index, e.score, to_string(e.label));
  }
}

}  // namespace ucal
