#pragma once

#include "splitkit/coding.hpp"
#include "splitkit/energy.hpp"
#include "splitkit/generators.hpp"
#include "splitkit/polyfit.hpp"
#include "splitkit/report.hpp"
#include "splitkit/split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace splitkit {

namespace detail {

// Type-7 (linear interpolation between order statistics) quantile.
inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - std::floor(h)) * (v[lo + 1] - v[lo]);
}

inline double mean(const std::vector<double>& v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

inline std::vector<double> dataset_column(const Dataset& d, Index col,
                                          std::span<const Index> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (Index r : rows)
    out.push_back(d.columns[static_cast<std::size_t>(col)].numeric[static_cast<std::size_t>(r)]);
  return out;
}

inline std::vector<Index> all_rows(Index n) {
  std::vector<Index> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

}  // namespace detail

/// Solver settings used inside the reproduction studies. Convergence to
/// 1e-6 is ample for subsampling; the row assignment is insensitive far
/// below that.
inline SolverConfig study_solver_config(std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.max_iter = 200;
  cfg.tol = 1e-6;
  return cfg;
}

// ---------------------------------------------------------------------------
// Marginal matching study
// ---------------------------------------------------------------------------

struct MarginalStudyConfig {
  Index n_rows = 1000;
  double gamma = 0.1;
  int sp_reps = 20;
  int random_reps = 100;
  std::uint64_t seed = 1;
};

/// Per-method marginal KS statistics (test set vs full data) and two-sample
/// energy on bivariate-normal data. SPlit and random are replicated over
/// derived seeds; CADEX and DUPLEX are deterministic and run once.
inline StudyReport run_marginal_study(const MarginalStudyConfig& cfg = {}) {
  if (cfg.sp_reps < 1 || cfg.random_reps < 1)
    throw std::invalid_argument("run_marginal_study: reps >= 1 required");
  const Dataset data = gen_bivariate_normal(cfg.n_rows, cfg.seed);
  const auto full = detail::all_rows(data.rows());
  const std::vector<double> full_x1 = detail::dataset_column(data, 0, full);
  const std::vector<double> full_x2 = detail::dataset_column(data, 1, full);

  StudyReport report;
  report.study = "marginal";
  report.set_config("study", std::string("marginal"));
  report.set_config("N", std::to_string(cfg.n_rows));
  report.set_config("gamma", cfg.gamma);
  report.set_config("sp_reps", std::to_string(cfg.sp_reps));
  report.set_config("random_reps", std::to_string(cfg.random_reps));
  report.set_config("seed", cfg.seed);
  report.columns = {"method", "rep", "seed", "ks_x1", "ks_x2", "energy"};

  auto add = [&](const std::string& method, int rep, std::uint64_t seed,
                 const SplitResult& result) {
    report.rows.push_back(
        {method, std::to_string(rep), std::to_string(seed),
         StudyReport::cell(ks_statistic(detail::dataset_column(data, 0, result.test_indices),
                                        full_x1)),
         StudyReport::cell(ks_statistic(detail::dataset_column(data, 1, result.test_indices),
                                        full_x2)),
         StudyReport::cell(result.diagnostics.energy)});
  };

  for (int rep = 0; rep < cfg.sp_reps; ++rep) {
    const std::uint64_t seed = Rng::derive(cfg.seed, 1000 + static_cast<std::uint64_t>(rep));
    add("split", rep, seed, split(data, cfg.gamma, study_solver_config(seed)));
  }
  for (int rep = 0; rep < cfg.random_reps; ++rep) {
    const std::uint64_t seed = Rng::derive(cfg.seed, 2000 + static_cast<std::uint64_t>(rep));
    add("random", rep, seed, random_split(data, cfg.gamma, seed));
  }
  add("cadex", 0, 0, cadex_split(data, cfg.gamma));
  add("duplex", 0, 0, duplex_split(data, cfg.gamma));
  return report;
}

// ---------------------------------------------------------------------------
// Generalization-error bias study
// ---------------------------------------------------------------------------

struct BiasStudyConfig {
  Index n_rows = 1000;
  std::vector<double> ratios = {0.1, 0.5};
  int degree_min = 2;
  int degree_max = 6;
  int reps = 100;
  std::uint64_t seed = 1;
  bool fixed_data = false;  // reuse one dataset across reps
  // Run the solver to displacement convergence: n = N/2 solves polish
  // slowly, and a tight iteration cap leaves solver-induced bias in the
  // subsample.
  double solver_tol = 1e-4;
  int solver_max_iter = 2500;
};

/// Per-replicate estimation error (test estimate minus exact value) of the
/// generalization error of polynomial fits on quadratic data, for SPlit,
/// random, CADEX, and DUPLEX splits.
inline StudyReport run_bias_study(const BiasStudyConfig& cfg = {}) {
  if (cfg.reps < 1) throw std::invalid_argument("run_bias_study: reps >= 1 required");
  if (cfg.degree_min < 0 || cfg.degree_max < cfg.degree_min)
    throw std::invalid_argument("run_bias_study: bad degree range");

  StudyReport report;
  report.study = "bias";
  report.set_config("study", std::string("bias"));
  report.set_config("N", std::to_string(cfg.n_rows));
  report.set_config("reps", std::to_string(cfg.reps));
  report.set_config("seed", cfg.seed);
  report.set_config("fixed_data", std::string(cfg.fixed_data ? "true" : "false"));
  report.columns = {"method", "gamma", "degree", "rep", "seed", "err_hat", "err_true", "err"};

  const std::vector<std::string> methods = {"split", "random", "cadex", "duplex"};
  for (int rep = 0; rep < cfg.reps; ++rep) {
    const std::uint64_t data_seed =
        Rng::derive(cfg.seed, cfg.fixed_data ? 0 : static_cast<std::uint64_t>(rep));
    const Dataset data = gen_quadratic(cfg.n_rows, data_seed);
    for (double gamma : cfg.ratios) {
      for (const auto& method : methods) {
        const std::uint64_t seed =
            Rng::derive(cfg.seed, 10000 + static_cast<std::uint64_t>(rep) * 16 +
                                      static_cast<std::uint64_t>(gamma * 10));
        SplitResult result;
        if (method == "split") {
          SolverConfig solver_cfg = study_solver_config(seed);
          solver_cfg.tol = cfg.solver_tol;
          solver_cfg.max_iter = cfg.solver_max_iter;
          result = split(data, gamma, solver_cfg);
        } else if (method == "random") result = random_split(data, gamma, seed);
        else if (method == "cadex") result = cadex_split(data, gamma);
        else result = duplex_split(data, gamma);

        const auto train_x = detail::dataset_column(data, 0, result.train_indices);
        const auto train_y = detail::dataset_column(data, 1, result.train_indices);
        const auto test_x = detail::dataset_column(data, 0, result.test_indices);
        const auto test_y = detail::dataset_column(data, 1, result.test_indices);
        for (int r = cfg.degree_min; r <= cfg.degree_max; ++r) {
          const PolyModel model = fit_polynomial(train_x, train_y, r);
          const double err_hat = estimate_generalization_error(model, test_x, test_y);
          const double err_true = true_generalization_error(model);
          report.rows.push_back({method, detail::format_double(gamma), std::to_string(r),
                                 std::to_string(rep), std::to_string(seed),
                                 StudyReport::cell(err_hat), StudyReport::cell(err_true),
                                 StudyReport::cell(err_hat - err_true)});
        }
      }
    }
  }
  return report;
}

struct BiasCell {
  std::string method;
  double gamma = 0.0;
  int degree = 0;
  double mean = 0.0;
  double median = 0.0;
  double iqr = 0.0;
  int count = 0;
};

/// Mean/median/IQR of the estimation error per (method, gamma, degree) cell.
inline std::vector<BiasCell> summarize_bias(const StudyReport& report) {
  const Index c_method = report.column_index("method");
  const Index c_gamma = report.column_index("gamma");
  const Index c_degree = report.column_index("degree");
  const Index c_err = report.column_index("err");
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> cells;
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const auto& row = report.rows[r];
    cells[{row[static_cast<std::size_t>(c_method)], row[static_cast<std::size_t>(c_gamma)],
           row[static_cast<std::size_t>(c_degree)]}]
        .push_back(report.number(r, c_err));
  }
  std::vector<BiasCell> out;
  for (const auto& [key, values] : cells) {
    BiasCell cell;
    cell.method = std::get<0>(key);
    detail::parse_number(std::get<1>(key), cell.gamma);
    cell.degree = std::stoi(std::get<2>(key));
    cell.mean = detail::mean(values);
    cell.median = detail::quantile(values, 0.5);
    cell.iqr = detail::quantile(values, 0.75) - detail::quantile(values, 0.25);
    cell.count = static_cast<int>(values.size());
    out.push_back(std::move(cell));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coding comparison study
// ---------------------------------------------------------------------------

struct CodingStudyConfig {
  Index m_min = 2;
  Index m_max = 10;
  Index replicates_per_level = 1000;
  Index points_per_level = 100;
  std::uint64_t seed = 1;
};

/// For each level count m and coding scheme: fit 100*m support points to the
/// encoded replicated-levels dataset and record the within-cluster RMSE
/// against the m coded level points, together with the coding's mean
/// absolute column correlation and separation distance.
inline StudyReport run_coding_study(const CodingStudyConfig& cfg = {}) {
  if (cfg.m_min < 2 || cfg.m_max < cfg.m_min)
    throw std::invalid_argument("run_coding_study: bad m range");

  StudyReport report;
  report.study = "coding";
  report.set_config("study", std::string("coding"));
  report.set_config("replicates_per_level", std::to_string(cfg.replicates_per_level));
  report.set_config("points_per_level", std::to_string(cfg.points_per_level));
  report.set_config("seed", cfg.seed);
  report.columns = {"coding", "m", "n_points", "seed", "within_rmse", "mean_abs_correlation",
                    "separation_distance"};

  const std::vector<CodingScheme> schemes = {CodingScheme::Treatment, CodingScheme::Sum,
                                             CodingScheme::Helmert,
                                             CodingScheme::OrthogonalPolynomial};
  for (Index m = cfg.m_min; m <= cfg.m_max; ++m) {
    const Dataset data = gen_replicated_levels(m, cfg.replicates_per_level);
    // One seed per m, shared by every coding, so schemes with identical
    // encoded geometry get identical solver runs.
    const std::uint64_t seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(m));
    for (CodingScheme scheme : schemes) {
      const StandardizedMatrix enc = encode(data, scheme);
      SolverConfig solver_cfg = study_solver_config(seed);
      solver_cfg.tol = 1e-6;
      solver_cfg.max_iter = 500;
      solver_cfg.n = cfg.points_per_level * m;
      const SolverReport fit = fit_support_points(enc.values, solver_cfg);
      const ContrastMatrix contrast = make_coding(scheme, m);
      const double rmse = within_rmse(fit.points, contrast.columns);
      const double mac = m >= 3 ? mean_abs_correlation(contrast)
                                : std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back({coding_name(scheme), std::to_string(m),
                             std::to_string(solver_cfg.n), std::to_string(seed),
                             StudyReport::cell(rmse), StudyReport::cell(mac),
                             StudyReport::cell(separation_distance(contrast))});
    }
  }
  return report;
}

/// Looks up one numeric cell of a coding report.
inline double coding_cell(const StudyReport& report, const std::string& coding, Index m,
                          const std::string& column) {
  const Index c_coding = report.column_index("coding");
  const Index c_m = report.column_index("m");
  const Index c_val = report.column_index(column);
  for (std::size_t r = 0; r < report.rows.size(); ++r)
    if (report.rows[r][static_cast<std::size_t>(c_coding)] == coding &&
        report.rows[r][static_cast<std::size_t>(c_m)] == std::to_string(m))
      return report.number(r, c_val);
  throw std::invalid_argument("coding_cell: no such cell");
}

}  // namespace splitkit
