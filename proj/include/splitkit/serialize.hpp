#pragma once

#include "splitkit/report.hpp"
#include "splitkit/split.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <string>

namespace splitkit {

/// JSON form of a split: {method, gamma, seed, test_indices, train_indices,
/// diagnostics}. Indices are 0-based row positions in the source CSV body.
inline nlohmann::json to_json(const SplitResult& r) {
  return nlohmann::json{{"method", r.method},
                        {"gamma", r.gamma},
                        {"seed", r.seed},
                        {"test_indices", r.test_indices},
                        {"train_indices", r.train_indices},
                        {"diagnostics",
                         {{"objective", r.diagnostics.objective},
                          {"iterations", r.diagnostics.iterations},
                          {"energy", r.diagnostics.energy},
                          {"converged", r.diagnostics.converged}}}};
}

inline SplitResult split_from_json(const nlohmann::json& j) {
  SplitResult r;
  r.method = j.at("method").get<std::string>();
  r.gamma = j.at("gamma").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.test_indices = j.at("test_indices").get<std::vector<Index>>();
  r.train_indices = j.at("train_indices").get<std::vector<Index>>();
  std::sort(r.test_indices.begin(), r.test_indices.end());
  std::sort(r.train_indices.begin(), r.train_indices.end());
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    r.diagnostics.objective = d.value("objective", std::numeric_limits<double>::quiet_NaN());
    r.diagnostics.iterations = d.value("iterations", 0);
    r.diagnostics.energy = d.value("energy", std::numeric_limits<double>::quiet_NaN());
    r.diagnostics.converged = d.value("converged", true);
  }
  return r;
}

inline nlohmann::json to_json(const FoldAssignment& f) {
  return nlohmann::json{{"folds", f.folds}};
}

inline FoldAssignment folds_from_json(const nlohmann::json& j) {
  FoldAssignment f;
  f.folds = j.at("folds").get<std::vector<std::vector<Index>>>();
  return f;
}

inline nlohmann::json to_json(const StudyReport& r) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : r.config) config[key] = value;
  return nlohmann::json{
      {"study", r.study}, {"config", config}, {"columns", r.columns}, {"rows", r.rows}};
}

inline StudyReport report_from_json(const nlohmann::json& j) {
  StudyReport r;
  r.study = j.at("study").get<std::string>();
  for (const auto& [key, value] : j.at("config").items())
    r.config.emplace_back(key, value.get<std::string>());
  r.columns = j.at("columns").get<std::vector<std::string>>();
  r.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  return r;
}

inline void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

}  // namespace splitkit
