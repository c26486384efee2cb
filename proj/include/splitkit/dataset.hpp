#pragma once

#include "splitkit/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace splitkit {

enum class ColumnKind { Continuous, Categorical, Ordinal };

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::vector<std::string> levels;  // categorical/ordinal, first-appearance order
  std::vector<double> scores;       // ordinal only, strictly increasing
};

/// Immutable tabular dataset. Continuous/ordinal cells are stored as parsed
/// doubles, categorical cells as level ids into the schema's level list, so
/// the original rows can be written back verbatim (numbers at 17 significant
/// digits).
struct Dataset {
  struct Column {
    std::vector<double> numeric;  // continuous
    std::vector<int> level;       // categorical/ordinal
  };

  std::vector<ColumnSchema> schema;
  std::vector<Column> columns;
  Index n_rows = 0;

  Index rows() const { return n_rows; }
  Index cols() const { return static_cast<Index>(schema.size()); }

  Index column_index(const std::string& name) const {
    for (std::size_t c = 0; c < schema.size(); ++c)
      if (schema[c].name == name) return static_cast<Index>(c);
    throw std::invalid_argument("dataset: no column named '" + name + "'");
  }
};

/// Optional per-column kind declarations for load_csv.
struct SchemaSpec {
  std::vector<std::string> continuous;
  std::vector<std::string> categorical;
  // Ordinal scores are positional over the column's levels in
  // first-appearance order; an empty vector means default scores 1..m.
  std::map<std::string, std::vector<double>> ordinal;
};

namespace detail {

inline void validate_dataset(const Dataset& d) {
  if (d.schema.empty()) throw std::invalid_argument("dataset: at least one column required");
  if (d.n_rows < 2) throw std::invalid_argument("dataset: N >= 2 required");
  if (d.columns.size() != d.schema.size())
    throw std::invalid_argument("dataset: schema/column mismatch");
  for (std::size_t c = 0; c < d.schema.size(); ++c) {
    const auto& s = d.schema[c];
    const auto& col = d.columns[c];
    if (s.kind == ColumnKind::Continuous) {
      if (static_cast<Index>(col.numeric.size()) != d.n_rows)
        throw std::invalid_argument("dataset: column '" + s.name + "' has wrong length");
      continue;
    }
    if (s.levels.empty())
      throw std::invalid_argument("dataset: column '" + s.name + "' has no levels");
    for (std::size_t i = 0; i < s.levels.size(); ++i)
      for (std::size_t j = i + 1; j < s.levels.size(); ++j)
        if (s.levels[i] == s.levels[j])
          throw std::invalid_argument("dataset: duplicate level '" + s.levels[i] +
                                      "' in column '" + s.name + "'");
    if (static_cast<Index>(col.level.size()) != d.n_rows)
      throw std::invalid_argument("dataset: column '" + s.name + "' has wrong length");
    for (int v : col.level)
      if (v < 0 || v >= static_cast<int>(s.levels.size()))
        throw std::invalid_argument("dataset: out-of-range level id in column '" + s.name + "'");
    if (s.kind == ColumnKind::Ordinal) {
      if (s.scores.size() != s.levels.size())
        throw std::invalid_argument("dataset: ordinal column '" + s.name +
                                    "' needs one score per level");
      for (std::size_t i = 1; i < s.scores.size(); ++i)
        if (!(s.scores[i] > s.scores[i - 1]))
          throw std::invalid_argument("dataset: ordinal scores of '" + s.name +
                                      "' must be strictly increasing");
    }
  }
}

inline bool parse_number(const std::string& field, double& out) {
  if (field.empty()) return false;
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end != begin + field.size() || errno == ERANGE) return false;
  if (!std::isfinite(v)) return false;
  out = v;
  return true;
}

// RFC-4180-ish record reader: comma separated, double quotes with ""
// escapes, newlines allowed inside quoted fields, \r\n tolerated.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_open = false;  // true while the current record has content
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_open = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_open = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_open || !field.empty() || !record.empty()) {
          record.push_back(std::move(field));
          field.clear();
          records.push_back(std::move(record));
          record.clear();
          field_open = false;
        }
        break;
      default:
        field.push_back(c);
        field_open = true;
        break;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (field_open || !field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace detail

/// Reads a CSV file with a header row. Columns named in `spec` take the
/// declared kind; the rest are inferred (all cells numeric -> continuous,
/// otherwise categorical with levels in first-appearance order).
inline Dataset load_csv(const std::string& path, const SchemaSpec& spec = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");
  const auto records = detail::parse_csv(in);
  if (records.empty()) throw std::runtime_error("load_csv: empty file '" + path + "'");
  const auto& header = records.front();
  if (records.size() < 2) throw std::runtime_error("load_csv: no data rows in '" + path + "'");

  const std::size_t ncol = header.size();
  const std::size_t nrow = records.size() - 1;
  for (std::size_t r = 1; r < records.size(); ++r)
    if (records[r].size() != ncol)
      throw std::runtime_error("load_csv: ragged row " + std::to_string(r) + " (" +
                               std::to_string(records[r].size()) + " fields, expected " +
                               std::to_string(ncol) + ")");

  enum class Decl { None, Continuous, Categorical, Ordinal };
  std::vector<Decl> decl(ncol, Decl::None);
  auto mark = [&](const std::string& name, Decl kind) {
    for (std::size_t c = 0; c < ncol; ++c)
      if (header[c] == name) {
        decl[c] = kind;
        return;
      }
    throw std::runtime_error("load_csv: declared column '" + name + "' not in header");
  };
  for (const auto& name : spec.continuous) mark(name, Decl::Continuous);
  for (const auto& name : spec.categorical) mark(name, Decl::Categorical);
  for (const auto& [name, scores] : spec.ordinal) mark(name, Decl::Ordinal);

  Dataset d;
  d.n_rows = static_cast<Index>(nrow);
  d.schema.resize(ncol);
  d.columns.resize(ncol);

  for (std::size_t c = 0; c < ncol; ++c) {
    auto& s = d.schema[c];
    s.name = header[c];

    bool numeric = decl[c] != Decl::Categorical && decl[c] != Decl::Ordinal;
    std::vector<double> values(nrow);
    for (std::size_t r = 0; r < nrow && numeric; ++r) {
      const std::string& cell = records[r + 1][c];
      if (cell.empty())
        throw std::runtime_error("load_csv: missing cell at row " + std::to_string(r + 1) +
                                 ", column '" + s.name + "'");
      if (!detail::parse_number(cell, values[r])) {
        if (decl[c] == Decl::Continuous)
          throw std::runtime_error("load_csv: non-numeric cell '" + cell +
                                   "' in declared-continuous column '" + s.name + "'");
        numeric = false;
      }
    }

    if (numeric) {
      s.kind = ColumnKind::Continuous;
      d.columns[c].numeric = std::move(values);
      continue;
    }

    s.kind = decl[c] == Decl::Ordinal ? ColumnKind::Ordinal : ColumnKind::Categorical;
    std::unordered_map<std::string, int> lookup;
    auto& ids = d.columns[c].level;
    ids.resize(nrow);
    for (std::size_t r = 0; r < nrow; ++r) {
      const std::string& cell = records[r + 1][c];
      if (cell.empty())
        throw std::runtime_error("load_csv: missing cell at row " + std::to_string(r + 1) +
                                 ", column '" + s.name + "'");
      auto it = lookup.find(cell);
      if (it == lookup.end()) {
        it = lookup.emplace(cell, static_cast<int>(s.levels.size())).first;
        s.levels.push_back(cell);
      }
      ids[r] = it->second;
    }
    if (s.kind == ColumnKind::Ordinal) {
      const auto& scores = spec.ordinal.at(s.name);
      if (scores.empty()) {
        s.scores.resize(s.levels.size());
        for (std::size_t i = 0; i < s.levels.size(); ++i) s.scores[i] = static_cast<double>(i + 1);
      } else {
        if (scores.size() != s.levels.size())
          throw std::runtime_error("load_csv: ordinal column '" + s.name + "' has " +
                                   std::to_string(s.levels.size()) + " levels but " +
                                   std::to_string(scores.size()) + " scores");
        s.scores = scores;
      }
    }
  }

  detail::validate_dataset(d);
  return d;
}

/// Writes the full dataset (header plus all rows, original order) as CSV.
inline void write_csv(const Dataset& d, std::ostream& out) {
  for (Index c = 0; c < d.cols(); ++c) {
    if (c) out << ',';
    out << detail::csv_quote(d.schema[static_cast<std::size_t>(c)].name);
  }
  out << '\n';
  for (Index r = 0; r < d.rows(); ++r) {
    for (Index c = 0; c < d.cols(); ++c) {
      if (c) out << ',';
      const auto& s = d.schema[static_cast<std::size_t>(c)];
      const auto& col = d.columns[static_cast<std::size_t>(c)];
      if (s.kind == ColumnKind::Continuous)
        out << detail::format_double(col.numeric[static_cast<std::size_t>(r)]);
      else
        out << detail::csv_quote(
            s.levels[static_cast<std::size_t>(col.level[static_cast<std::size_t>(r)])]);
    }
    out << '\n';
  }
}

/// Row subset of a dataset, preserving schema and row order of `rows`.
inline Dataset subset_rows(const Dataset& d, std::span<const Index> rows) {
  Dataset out;
  out.schema = d.schema;
  out.n_rows = static_cast<Index>(rows.size());
  out.columns.resize(d.columns.size());
  for (std::size_t c = 0; c < d.columns.size(); ++c) {
    const auto& src = d.columns[c];
    auto& dst = out.columns[c];
    if (d.schema[c].kind == ColumnKind::Continuous) {
      dst.numeric.reserve(rows.size());
      for (Index r : rows) dst.numeric.push_back(src.numeric[static_cast<std::size_t>(r)]);
    } else {
      dst.level.reserve(rows.size());
      for (Index r : rows) dst.level.push_back(src.level[static_cast<std::size_t>(r)]);
    }
  }
  return out;
}

/// Emits the original rows of a test/train partition to two CSV files,
/// each keeping the original header and dataset row order.
inline void write_split(const Dataset& d, std::span<const Index> test_rows,
                        std::span<const Index> train_rows, const std::string& test_path,
                        const std::string& train_path) {
  std::vector<char> seen(static_cast<std::size_t>(d.rows()), 0);
  auto absorb = [&](std::span<const Index> part) {
    for (Index r : part) {
      if (r < 0 || r >= d.rows() || seen[static_cast<std::size_t>(r)])
        throw std::invalid_argument("write_split: indices must partition the dataset rows");
      seen[static_cast<std::size_t>(r)] = 1;
    }
  };
  absorb(test_rows);
  absorb(train_rows);
  if (static_cast<Index>(test_rows.size() + train_rows.size()) != d.rows())
    throw std::invalid_argument("write_split: indices must partition the dataset rows");

  auto emit = [&](std::span<const Index> part, const std::string& path) {
    std::vector<Index> ordered(part.begin(), part.end());
    std::sort(ordered.begin(), ordered.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_split: cannot write '" + path + "'");
    write_csv(subset_rows(d, ordered), out);
    if (!out) throw std::runtime_error("write_split: write failed for '" + path + "'");
  };
  emit(test_rows, test_path);
  emit(train_rows, train_path);
}

}  // namespace splitkit
