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

#include "qsdc/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsdc {

namespace {

constexpr std::string_view kConfigPrefix = "# effective-config: ";

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

ComparisonRow parse_csv_row(const std::string& line) {
    const auto cells = split(line, ',');
    if (cells.size() != 10) throw std::invalid_argument("report row must have 10 columns: " + line);
    ComparisonRow row;
    row.quantity = cells[0];
    row.params = parse_params(cells[1]);
    row.closed_form = parse_double(cells[2]);
    row.simulated.point = parse_double(cells[3]);
    row.simulated.std_error = parse_double(cells[4]);
    row.simulated.ci_low = parse_double(cells[5]);
    row.simulated.ci_high = parse_double(cells[6]);
    if (cells[7] != "true" && cells[7] != "false") throw std::invalid_argument("pass must be true or false");
    row.pass = cells[7] == "true";
    row.simulated.n_trials = static_cast<std::size_t>(std::stoull(cells[8]));
    row.tolerance = parse_double(cells[9]);
    return row;
}

}  // namespace

std::string_view to_string(ReportFormat format) { return format == ReportFormat::Csv ? "csv" : "json"; }

ReportFormat report_format_from_string(std::string_view name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format: " + std::string(name));
}

std::string format_report(std::span<const ComparisonRow> rows, ReportFormat format,
                          const std::optional<Json>& effective_config) {
    if (format == ReportFormat::Json) {
        Json doc{{"rows", Json::array()}};
        for (const auto& r : rows) doc["rows"].push_back(r);
        doc["effective_config"] = effective_config ? *effective_config : Json(nullptr);
        return doc.dump(2) + "\n";
    }
    std::string out;
    if (effective_config) out += std::string(kConfigPrefix) + canonical_dump(*effective_config) + "\n";
    out += std::string(kReportHeader) + "\n";
    for (const auto& r : rows) {
        if (r.quantity.find_first_of(",\n") != std::string::npos) {
            throw std::invalid_argument("quantity names cannot contain commas or newlines");
        }
        out += r.quantity + ',' + format_params(r.params) + ',' + num(r.closed_form) + ',' + num(r.simulated.point) +
               ',' + num(r.simulated.std_error) + ',' + num(r.simulated.ci_low) + ',' + num(r.simulated.ci_high) +
               ',' + (r.pass ? "true" : "false") + ',' + std::to_string(r.simulated.n_trials) + ',' +
               num(r.tolerance) + "\n";
    }
    return out;
}

Report parse_report(std::string_view text, ReportFormat format) {
    Report report;
    if (format == ReportFormat::Json) {
        const Json doc = Json::parse(text);
        if (doc.contains("effective_config") && !doc.at("effective_config").is_null()) {
            report.effective_config = doc.at("effective_config");
        }
        report.rows = doc.at("rows").get<std::vector<ComparisonRow>>();
        return report;
    }
    std::stringstream ss{std::string(text)};
    std::string line;
    bool header_seen = false;
    while (std::getline(ss, line)) {
        if (!header_seen) {
            if (line.rfind(kConfigPrefix, 0) == 0) {
                report.effective_config = Json::parse(line.substr(kConfigPrefix.size()));
                continue;
            }
            if (line != kReportHeader) throw std::invalid_argument("missing report header");
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        report.rows.push_back(parse_csv_row(line));
    }
    if (!header_seen) throw std::invalid_argument("missing report header");
    return report;
}

void emit_report(std::span<const ComparisonRow> rows, ReportFormat format, const std::string& path,
                 const std::optional<Json>& effective_config) {
    write_text_file(path, format_report(rows, format, effective_config));
}

std::string format_sweep(std::span<const SweepPoint> points, ReportFormat format,
                         const std::optional<Json>& effective_config, const std::optional<GammaFit>& fit) {
    if (format == ReportFormat::Json) {
        Json doc{{"points", Json::array()}};
        for (const auto& p : points) doc["points"].push_back(Json{{"n", p.n}, {"success", p.success}});
        doc["effective_config"] = effective_config ? *effective_config : Json(nullptr);
        doc["fit"] = fit ? Json{{"gamma", fit->gamma}, {"residual", fit->residual}} : Json(nullptr);
        return doc.dump(2) + "\n";
    }
    std::string out;
    if (effective_config) out += std::string(kConfigPrefix) + canonical_dump(*effective_config) + "\n";
    if (fit) out += "# gamma: " + num(fit->gamma) + " residual: " + num(fit->residual) + "\n";
    out += "n,point,stderr,ci_low,ci_high,n_trials\n";
    for (const auto& p : points) {
        out += std::to_string(p.n) + ',' + num(p.success.point) + ',' + num(p.success.std_error) + ',' +
               num(p.success.ci_low) + ',' + num(p.success.ci_high) + ',' + std::to_string(p.success.n_trials) + "\n";
    }
    return out;
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace qsdc
