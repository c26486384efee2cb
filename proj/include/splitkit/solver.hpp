#pragma once

#include "splitkit/core.hpp"
#include "splitkit/rng.hpp"

#include <cstring>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace splitkit {

struct SolverConfig {
  Index n = 1;                 // number of free points
  std::uint64_t seed = 0;      // initialization seed
  int max_iter = 500;
  double tol = 1e-8;           // max per-point infinity-norm displacement
  double delta = 1e-10;        // distance safeguard
  Matrix fixed;                // points that repel but never move (0 rows = none)
  int workers = 1;             // results are independent of this
};

struct SolverReport {
  Matrix points;                        // optimized free points
  Matrix fixed_points;                  // cfg.fixed, returned unchanged
  int iterations = 0;                   // sweeps performed
  std::vector<double> objective_trace;  // objective of iterate t at index t
  bool converged = false;
};

namespace detail {

// Duplicate data rows collapsed to (unique row, multiplicity); representatives
// keep first-occurrence order. The weighted sums the solver computes over the
// unique rows equal the plain sums over all rows up to last-bit rounding.
struct WeightedRows {
  Matrix rows;
  std::vector<double> weight;
  double total = 0.0;
};

inline WeightedRows collapse_rows(const Matrix& data) {
  const Index N = data.rows();
  const Index d = data.cols();
  std::unordered_map<std::string, Index> seen;
  seen.reserve(static_cast<std::size_t>(N) * 2);
  std::vector<Index> rep;
  std::vector<double> weight;
  std::string key(static_cast<std::size_t>(d) * sizeof(double), '\0');
  for (Index r = 0; r < N; ++r) {
    std::memcpy(key.data(), data.row(r).data(), key.size());
    auto [it, inserted] = seen.emplace(key, static_cast<Index>(rep.size()));
    if (inserted) {
      rep.push_back(r);
      weight.push_back(1.0);
    } else {
      weight[static_cast<std::size_t>(it->second)] += 1.0;
    }
  }
  WeightedRows wd;
  wd.rows.resize(static_cast<Index>(rep.size()), d);
  for (std::size_t u = 0; u < rep.size(); ++u) wd.rows.row(static_cast<Index>(u)) = data.row(rep[u]);
  wd.weight = std::move(weight);
  wd.total = static_cast<double>(N);
  return wd;
}

inline WeightedRows unit_rows(const Matrix& data) {
  WeightedRows wd;
  wd.rows = data;
  wd.weight.assign(static_cast<std::size_t>(data.rows()), 1.0);
  wd.total = static_cast<double>(data.rows());
  return wd;
}

// Data-attraction and self-repulsion sums contributed by the fixed points;
// they involve no free point and stay constant across sweeps.
struct FixedTerms {
  double attract = 0.0;
  double repulse = 0.0;
};

inline FixedTerms fixed_terms(const WeightedRows& wd, const Matrix& fixed) {
  FixedTerms ft;
  const Index f = fixed.rows();
  if (f == 0) return ft;
  std::vector<double> acc(static_cast<std::size_t>(f));
  for (Index i = 0; i < f; ++i)
    acc[static_cast<std::size_t>(i)] =
        pairwise_sum(0, static_cast<std::size_t>(wd.rows.rows()), [&](std::size_t j) {
          return wd.weight[j] * row_distance(fixed, i, wd.rows, static_cast<Index>(j));
        });
  ft.attract = pairwise_sum(acc);
  for (Index i = 0; i < f; ++i)
    acc[static_cast<std::size_t>(i)] =
        pairwise_sum(0, static_cast<std::size_t>(f), [&](std::size_t k) {
          return row_distance(fixed, i, fixed, static_cast<Index>(k));
        });
  ft.repulse = pairwise_sum(acc);
  return ft;
}

// One pass over the free points: evaluates the combined-set objective at
// `points` and, when `next` is non-null, writes the Jacobi
// majorization-minimization update. Per-point results are reduced in point
// order, so the output does not depend on `workers`.
inline double sweep_impl(const Matrix& points, const WeightedRows& wd, const Matrix& fixed,
                         double delta, int workers, const FixedTerms& ft, Matrix* next) {
  const Index n = points.rows();
  const Index f = fixed.rows();
  const Index d = points.cols();
  const Index U = wd.rows.rows();
  const double n_tot = static_cast<double>(n + f);
  const double N = wd.total;

  std::vector<double> attract(static_cast<std::size_t>(n));
  std::vector<double> rep_all(static_cast<std::size_t>(n));
  std::vector<double> rep_fixed(static_cast<std::size_t>(n));

  auto run_range = [&](Index lo, Index hi) {
    std::vector<double> dbuf(static_cast<std::size_t>(U));
    std::vector<double> rbuf(static_cast<std::size_t>(n + f));
    Eigen::RowVectorXd wz(d);
    Eigen::RowVectorXd u(d);
    for (Index i = lo; i < hi; ++i) {
      for (Index j = 0; j < U; ++j)
        dbuf[static_cast<std::size_t>(j)] = row_distance(points, i, wd.rows, j);
      attract[static_cast<std::size_t>(i)] =
          pairwise_sum(0, static_cast<std::size_t>(U), [&](std::size_t j) {
            return wd.weight[j] * dbuf[j];
          });
      for (Index k = 0; k < n; ++k)
        rbuf[static_cast<std::size_t>(k)] = k == i ? 0.0 : row_distance(points, i, points, k);
      for (Index k = 0; k < f; ++k)
        rbuf[static_cast<std::size_t>(n + k)] = row_distance(points, i, fixed, k);
      rep_all[static_cast<std::size_t>(i)] =
          pairwise_sum(std::span<const double>(rbuf.data(), rbuf.size()));
      rep_fixed[static_cast<std::size_t>(i)] = pairwise_sum(
          std::span<const double>(rbuf.data() + n, static_cast<std::size_t>(f)));

      if (!next) continue;
      double wsum = 0.0;
      wz.setZero();
      for (Index j = 0; j < U; ++j) {
        const double w =
            wd.weight[static_cast<std::size_t>(j)] / std::max(dbuf[static_cast<std::size_t>(j)], delta);
        wsum += w;
        wz += w * wd.rows.row(j);
      }
      u.setZero();
      for (Index k = 0; k < n; ++k) {
        if (k == i) continue;
        u += (points.row(i) - points.row(k)) / std::max(rbuf[static_cast<std::size_t>(k)], delta);
      }
      for (Index k = 0; k < f; ++k)
        u += (points.row(i) - fixed.row(k)) / std::max(rbuf[static_cast<std::size_t>(n + k)], delta);
      next->row(i) = (wz + (N / n_tot) * u) / wsum;
    }
  };

  const int W = std::max(1, workers);
  if (W == 1 || n < 2 * W) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(W));
    for (int w = 0; w < W; ++w) {
      const Index lo = n * w / W;
      const Index hi = n * (w + 1) / W;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  const double attract_sum = pairwise_sum(attract) + ft.attract;
  const double rep_sum = pairwise_sum(rep_all) + pairwise_sum(rep_fixed) + ft.repulse;
  return 2.0 / (n_tot * N) * attract_sum - rep_sum / (n_tot * n_tot);
}

inline void check_solver_inputs(const Matrix& points, const Matrix& data, const Matrix& fixed) {
  if (points.cols() != data.cols())
    throw std::invalid_argument("solver: point/data dimension mismatch");
  if (fixed.rows() > 0 && fixed.cols() != data.cols())
    throw std::invalid_argument("solver: fixed-point dimension mismatch");
}

}  // namespace detail

/// n distinct data rows sampled without replacement with the seeded
/// generator, each coordinate perturbed by Gaussian jitter of scale 1e-6.
inline Matrix init_points(const Matrix& data, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("init_points: n >= 1 required");
  if (n > data.rows()) throw std::invalid_argument("init_points: n exceeds data rows");
  Rng rng(seed);
  const auto rows = sample_without_replacement(data.rows(), n, rng);
  Matrix points(n, data.cols());
  for (Index i = 0; i < n; ++i) points.row(i) = data.row(rows[static_cast<std::size_t>(i)]);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < data.cols(); ++k) points(i, k) += 1e-6 * rng.next_normal();
  return points;
}

/// One simultaneous (Jacobi) majorization-minimization update of every free
/// point:
///   z_i <- (sum_j w_ij)^-1 [ (N/n_tot) sum_{k != i} (z_i - z_k)/max(||z_i - z_k||, delta)
///                            + sum_j w_ij Z_j ],
/// with w_ij = 1/max(||z_i - Z_j||, delta), k running over free and fixed
/// points and n_tot their combined count. Never increases the objective.
inline Matrix ccp_sweep(const Matrix& points, const Matrix& data, const Matrix& fixed = Matrix(),
                        double delta = 1e-10) {
  detail::check_solver_inputs(points, data, fixed);
  const auto wd = detail::unit_rows(data);
  const auto ft = detail::fixed_terms(wd, fixed);
  Matrix next(points.rows(), points.cols());
  detail::sweep_impl(points, wd, fixed, delta, 1, ft, &next);
  return next;
}

/// Iterates ccp_sweep from the given initial points until the largest
/// per-point displacement falls below cfg.tol or cfg.max_iter is reached.
/// objective_trace[t] is the combined-set objective of iterate t (t = 0 is
/// the initialization); it is non-increasing. With cfg.fixed nonempty this
/// solves the conditional program in which the fixed points repel the free
/// ones but never move.
inline SolverReport fit_support_points(const Matrix& data, const SolverConfig& cfg,
                                       const Matrix& init) {
  if (data.rows() < 2) throw std::invalid_argument("fit_support_points: N >= 2 required");
  if (cfg.n < 1) throw std::invalid_argument("fit_support_points: n >= 1 required");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("fit_support_points: tol must be positive");
  if (!(cfg.delta > 0.0)) throw std::invalid_argument("fit_support_points: delta must be positive");
  if (init.rows() != cfg.n || init.cols() != data.cols())
    throw std::invalid_argument("fit_support_points: bad initial point shape");
  detail::check_solver_inputs(init, data, cfg.fixed);

  const auto wd = detail::collapse_rows(data);
  const auto ft = detail::fixed_terms(wd, cfg.fixed);

  SolverReport report;
  report.fixed_points = cfg.fixed;
  report.points = init;
  report.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iter) + 1);

  Matrix next(cfg.n, data.cols());
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const double objective =
        detail::sweep_impl(report.points, wd, cfg.fixed, cfg.delta, cfg.workers, ft, &next);
    report.objective_trace.push_back(objective);
    double disp = 0.0;
    for (Index i = 0; i < cfg.n; ++i)
      disp = std::max(disp, (next.row(i) - report.points.row(i)).cwiseAbs().maxCoeff());
    report.points.swap(next);
    ++report.iterations;
    if (disp < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  report.objective_trace.push_back(
      detail::sweep_impl(report.points, wd, cfg.fixed, cfg.delta, cfg.workers, ft, nullptr));
  return report;
}

/// As above, initialized by init_points(data, cfg.n, cfg.seed).
inline SolverReport fit_support_points(const Matrix& data, const SolverConfig& cfg) {
  return fit_support_points(data, cfg, init_points(data, cfg.n, cfg.seed));
}

}  // namespace splitkit
