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

// Frame-level anomaly metrics.
//
// Scores follow one polarity everywhere: higher means more anomalous. A
// threshold t flags every frame with score >= t, so equal scores always fall
// on the same side. Sweeping t over the distinct scores (plus "flag nothing")
// gives the realizable operating points every metric is defined on.
//
//   AUC-ROC  trapezoidal area under (FPR, TPR); a positive/negative tie
//            counts one half.
//   AUC-PR   average precision, sum over thresholds of dRecall * Precision.
//   EER      at the operating point minimizing |FPR - FNR|, (FPR + FNR) / 2;
//            among equally close points the smallest such value.
//   10ER     the smallest FPR among points with FNR <= 0.10.

#ifndef UCAL_METRICS_HPP
#define UCAL_METRICS_HPP

#include <cstddef>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "ucal/types.hpp"

namespace ucal {

struct ScoredFrame {
  FrameIndex frame_index = 0;
  double score = 0.0;
  Label label = Label::kNormal;

  friend bool operator==(const ScoredFrame&, const ScoredFrame&) = default;
};

struct ScoreSeries {
  std::vector<ScoredFrame> entries;

  std::size_t positives() const;
  std::size_t negatives() const;

  friend bool operator==(const ScoreSeries&, const ScoreSeries&) = default;
};

struct MetricReport {
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  double eer = 0.0;
  double ten_er = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

enum class Aggregator { kMax, kMean };

std::string_view to_string(Aggregator aggregator);
Aggregator parse_aggregator(std::string_view text);

/// Score of one pose window and the frames it spans.
struct WindowScore {
  std::vector<FrameIndex> covered_frames;
  double score = 0.0;
};

/// Per-frame scores: the aggregate over all windows covering a frame. Frames
/// no window covers get the minimum window score (0 when there are no
/// windows). Coverage of frames absent from `frames` is ignored, since
/// interpolation may bridge frames that belong to another split.
ScoreSeries aggregate_frame_scores(std::span<const WindowScore> window_scores,
                                   const CameraDataset& frames,
                                   Aggregator aggregator);

double auc_roc(const ScoreSeries& series);
double auc_pr(const ScoreSeries& series);
double eer(const ScoreSeries& series);
double fpr_at_fnr(const ScoreSeries& series, double target_fnr = 0.10);
MetricReport compute_all(const ScoreSeries& series);

void write_metric_csv_header(std::ostream& os);
void write_metric_csv_row(std::ostream& os, std::string_view camera_id,
                          std::string_view context, const MetricReport& report);

/// frame_index,score,label
void write_score_series_csv(std::ostream& os, const ScoreSeries& series);

}  // namespace ucal

#endif  // UCAL_METRICS_HPP
