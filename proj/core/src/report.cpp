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

#include "ucal/report.hpp"

#include <charconv>
#include <map>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ucal/error.hpp"

namespace ucal {
namespace {

constexpr std::string_view kTableHeader =
    "| AUC-ROC | AUC-PR | EER | 10ER |\n|---|---:|---:|---:|---:|\n";

void write_table(std::ostream& os, std::string_view first_column,
                 const std::vector<ReportRow>& rows) {
  fmt::print(os, "| {} {}", first_column, kTableHeader);
  for (const ReportRow& row : rows) os << format_markdown_row(row) << '\n';
}

void write_test_line(std::ostream& os, const MetricReport& r) {
  fmt::print(os, "Test set: {} normal / {} anomalous frames.\n\n", r.n_neg, r.n_pos);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(fmt::format("report line {}: bad number \"{}\"", line, text));
  }
  return value;
}

void write_notes(std::ostream& os) {
  os << "\nAUC-ROC and AUC-PR in percent; EER and 10ER as fractions. "
        "Frames no window covers score as least anomalous.\n"
        "Pose gaps are interpolated before smoothing.\n";
}

}  // namespace

std::string format_markdown_row(const ReportRow& row) {
  const MetricReport& m = row.metrics;
  return fmt::format("| {} | {:.2f} | {:.2f} | {:.2f} | {:.2f} |", row.label,
                     m.auc_roc * 100.0, m.auc_pr * 100.0, m.eer, m.ten_er);
}

std::vector<ReportRow> step_rows(const ContinualResult& result) {
  std::vector<ReportRow> rows{{"Baseline", result.baseline}};
  for (std::size_t i = 0; i < result.per_step.size(); ++i) {
    rows.push_back({std::to_string(i + 1), result.per_step[i]});
  }
  rows.push_back({"Normal Training", result.normal_training});
  return rows;
}

std::vector<ReportRow> summary_rows(const ContinualResult& result) {
  return {{"Baseline", result.baseline},
          {"UCAL Average", result.ucal_average},
          {"Normal Training", result.normal_training},
          {"UCAL Best", result.ucal_best}};
}

void write_continual_markdown(std::ostream& os, std::span<const ContinualResult> results) {
  if (results.empty()) throw DataError("report: no results");
  os << "# Continual evaluation\n";
  for (const ContinualResult& r : results) {
    fmt::print(os, "\n## Camera {}\n\n", r.camera_id);
    write_test_line(os, r.baseline);
    write_table(os, "Step", step_rows(r));
    os << '\n';
    write_table(os, "Summary", summary_rows(r));
  }
  write_notes(os);
}

void write_continual_csv(std::ostream& os, std::span<const ContinualResult> results) {
  if (results.empty()) throw DataError("report: no results");
  write_metric_csv_header(os);
  for (const ContinualResult& r : results) {
    write_metric_csv_row(os, r.camera_id, "baseline", r.baseline);
    for (std::size_t i = 0; i < r.per_step.size(); ++i) {
      write_metric_csv_row(os, r.camera_id, fmt::format("step_{}", i + 1), r.per_step[i]);
    }
    write_metric_csv_row(os, r.camera_id, "normal_training", r.normal_training);
    write_metric_csv_row(os, r.camera_id, "ucal_average", r.ucal_average);
    write_metric_csv_row(os, r.camera_id, "ucal_best", r.ucal_best);
  }
}

void write_standard_markdown(std::ostream& os, std::span<const StandardResult> results) {
  if (results.empty()) throw DataError("report: no results");
  os << "# Standard evaluation\n\n";
  std::vector<ReportRow> rows;
  for (const StandardResult& r : results) rows.push_back({r.camera_id, r.evaluation.report});
  write_table(os, "Camera", rows);
  write_notes(os);
}

void write_standard_csv(std::ostream& os, std::span<const StandardResult> results) {
  if (results.empty()) throw DataError("report: no results");
  write_metric_csv_header(os);
  for (const StandardResult& r : results) {
    write_metric_csv_row(os, r.camera_id, "standard", r.evaluation.report);
  }
}

ParsedReport read_report_csv(std::istream& is) {
  ParsedReport parsed;
  std::map<std::string, std::size_t> continual_index;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(is, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (line_number == 1) {
      if (f.size() != 8 || f[0] != "camera_id") {
        throw DataError("report: missing or unexpected CSV header");
      }
      continue;
    }
    if (f.size() != 8) {
      throw DataError(fmt::format("report line {}: expected 8 fields, got {}", line_number, f.size()));
    }
    MetricReport m;
    m.auc_roc = parse_number<double>(f[2], line_number);
    m.auc_pr = parse_number<double>(f[3], line_number);
    m.eer = parse_number<double>(f[4], line_number);
    m.ten_er = parse_number<double>(f[5], line_number);
    m.n_pos = parse_number<std::size_t>(f[6], line_number);
    m.n_neg = parse_number<std::size_t>(f[7], line_number);
    const std::string camera(f[0]);
    const std::string_view context = f[1];

    if (context == "standard") {
      StandardResult r;
      r.camera_id = camera;
      r.evaluation.report = m;
      parsed.standard.push_back(std::move(r));
      continue;
    }
    auto [it, inserted] = continual_index.try_emplace(camera, parsed.continual.size());
    if (inserted) {
      parsed.continual.emplace_back();
      parsed.continual.back().camera_id = camera;
    }
    ContinualResult& r = parsed.continual[it->second];
    if (context == "baseline") {
      r.baseline = m;
    } else if (context == "normal_training") {
      r.normal_training = m;
    } else if (context == "ucal_average") {
      r.ucal_average = m;
    } else if (context == "ucal_best") {
      r.ucal_best = m;
    } else if (context.starts_with("step_")) {
      const auto step = parse_number<std::size_t>(context.substr(5), line_number);
      if (step != r.per_step.size() + 1) {
        throw DataError(fmt::format("report line {}: step {} out of order", line_number, step));
      }
      r.per_step.push_back(m);
    } else {
      throw DataError(fmt::format("report line {}: unknown context \"{}\"", line_number, context));
    }
  }
  if (line_number == 0) throw DataError("report: empty CSV");
  return parsed;
}

}  // namespace ucal
