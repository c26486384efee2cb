#pragma once

#include "splitkit/core.hpp"
#include "splitkit/dataset.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace splitkit {

/// Tabular study output: a named column layout plus one row per recorded
/// observation, and a configuration echo (including every seed) sufficient
/// to recompute each statistic. Cells are kept as strings; numeric cells are
/// written with 17 significant digits so CSV/JSON round trips are lossless.
struct StudyReport {
  std::string study;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void set_config(const std::string& key, const std::string& value) {
    config.emplace_back(key, value);
  }
  void set_config(const std::string& key, double value) {
    config.emplace_back(key, detail::format_double(value));
  }
  void set_config(const std::string& key, std::uint64_t value) {
    config.emplace_back(key, std::to_string(value));
  }

  Index column_index(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) return static_cast<Index>(c);
    throw std::invalid_argument("report: no column named '" + name + "'");
  }

  double number(std::size_t row, Index col) const {
    double v = 0.0;
    if (!detail::parse_number(rows[row][static_cast<std::size_t>(col)], v)) {
      if (rows[row][static_cast<std::size_t>(col)] == "nan")
        return std::numeric_limits<double>::quiet_NaN();
      throw std::invalid_argument("report: non-numeric cell");
    }
    return v;
  }

  static std::string cell(double v) {
    return std::isfinite(v) ? detail::format_double(v) : std::string("nan");
  }
};

inline void write_report_csv(const StudyReport& report, std::ostream& out) {
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    if (c) out << ',';
    out << detail::csv_quote(report.columns[c]);
  }
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << detail::csv_quote(row[c]);
    }
    out << '\n';
  }
}

inline void write_report_csv(const StudyReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("report: cannot write '" + path + "'");
  write_report_csv(report, out);
}

/// Reads back the tabular part of a report (columns + rows).
inline StudyReport read_report_csv(std::istream& in) {
  const auto records = detail::parse_csv(in);
  if (records.empty()) throw std::runtime_error("report: empty csv");
  StudyReport report;
  report.columns = records.front();
  report.rows.assign(records.begin() + 1, records.end());
  return report;
}

inline StudyReport read_report_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("report: cannot open '" + path + "'");
  return read_report_csv(in);
}

}  // namespace splitkit
