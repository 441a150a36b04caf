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

// Report tables.
//
// Markdown follows the usual continual-benchmark layout: per camera, a step
// table (Baseline, 1..k, Normal Training) and a summary table (Baseline,
// UCAL Average, Normal Training, UCAL Best). AUC-ROC and AUC-PR print as
// percentages, EER and 10ER as fractions, all with two decimals.
//
// CSV keeps full precision: one MetricReport per row with context
// baseline | step_<i> | normal_training | ucal_average | ucal_best | standard.

#ifndef UCAL_REPORT_HPP
#define UCAL_REPORT_HPP

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ucal/runner.hpp"

namespace ucal {

/// Row label -> metrics, in table order.
struct ReportRow {
  std::string label;
  MetricReport metrics;
};

/// "| label | 54.32 | 51.59 | 0.46 | 0.84 |"
std::string format_markdown_row(const ReportRow& row);

/// Step table rows (k + 2) and summary rows (4) of a continual result.
std::vector<ReportRow> step_rows(const ContinualResult& result);
std::vector<ReportRow> summary_rows(const ContinualResult& result);

/// Throws DataError on an empty result list.
void write_continual_markdown(std::ostream& os, std::span<const ContinualResult> results);
void write_continual_csv(std::ostream& os, std::span<const ContinualResult> results);

void write_standard_markdown(std::ostream& os, std::span<const StandardResult> results);
void write_standard_csv(std::ostream& os, std::span<const StandardResult> results);

/// Parsed report.csv content.
struct ParsedReport {
  std::vector<ContinualResult> continual;
  std::vector<StandardResult> standard;  // evaluation.series left empty
};

/// Reads CSV written by write_continual_csv / write_standard_csv.
ParsedReport read_report_csv(std::istream& is);

}  // namespace ucal

#endif  // UCAL_REPORT_HPP
