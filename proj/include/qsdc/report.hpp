// Copyright 2026 The QSDC Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Long-format comparison reports.
//
// CSV columns: quantity,params,closed_form,point,stderr,ci_low,ci_high,pass,
// n_trials,tolerance. An optional first line "# effective-config: {...}"
// carries the configuration that produced the rows. Reals are written in the shortest
// form that round-trips, so parsing a report gives back the same rows.

#ifndef QSDC_REPORT_HPP
#define QSDC_REPORT_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsdc/analysis.hpp"
#include "qsdc/serialization.hpp"

namespace qsdc {

enum class ReportFormat { Csv, Json };

std::string_view to_string(ReportFormat format);
ReportFormat report_format_from_string(std::string_view name);

inline constexpr std::string_view kReportHeader =
    "quantity,params,closed_form,point,stderr,ci_low,ci_high,pass,n_trials,tolerance";

struct Report {
    std::optional<Json> effective_config;
    std::vector<ComparisonRow> rows;
};

std::string format_report(std::span<const ComparisonRow> rows, ReportFormat format,
                          const std::optional<Json>& effective_config = std::nullopt);

Report parse_report(std::string_view text, ReportFormat format);

/// Writes format_report(...) to `path`; throws std::runtime_error on I/O
/// failure.
void emit_report(std::span<const ComparisonRow> rows, ReportFormat format, const std::string& path,
                 const std::optional<Json>& effective_config = std::nullopt);

/// n,point,stderr,ci_low,ci_high,n_trials (CSV) or the JSON equivalent,
/// optionally with the fitted gamma.
std::string format_sweep(std::span<const SweepPoint> points, ReportFormat format,
                         const std::optional<Json>& effective_config = std::nullopt,
                         const std::optional<GammaFit>& fit = std::nullopt);

/// Writes `text` to `path`; throws std::runtime_error on failure.
void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace qsdc

#endif  // QSDC_REPORT_HPP
