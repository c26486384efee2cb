#pragma once

#include "splitkit/coding.hpp"
#include "splitkit/core.hpp"
#include "splitkit/dataset.hpp"
#include "splitkit/energy.hpp"
#include "splitkit/kdtree.hpp"
#include "splitkit/rng.hpp"
#include "splitkit/solver.hpp"
#include "splitkit/standardize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace splitkit {

struct SplitDiagnostics {
  double objective = std::numeric_limits<double>::quiet_NaN();  // subsample objective of D1
  int iterations = 0;                                           // solver sweeps (0 for baselines)
  double energy = std::numeric_limits<double>::quiet_NaN();     // two_sample_energy(test, full)
  bool converged = true;
};

/// Disjoint test/train row-index partition. Indices are 0-based positions
/// in the source dataset and stored sorted. For validation splits the
/// `test_indices` slot holds the validation rows and the universe is the
/// training set rather than the full dataset.
struct SplitResult {
  std::string method;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::vector<Index> test_indices;
  std::vector<Index> train_indices;
  SplitDiagnostics diagnostics;
};

struct FoldAssignment {
  std::vector<std::vector<Index>> folds;
};

namespace detail {

inline Index rounded_count(double gamma, Index n_rows) {
  // round(gamma*N), half away from zero
  return static_cast<Index>(std::llround(gamma * static_cast<double>(n_rows)));
}

inline Index checked_test_count(double gamma, Index n_rows) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("split: gamma must lie in (0,1)");
  const Index n_test = rounded_count(gamma, n_rows);
  if (n_test < 1 || n_test > n_rows - 1)
    throw std::invalid_argument("split: degenerate split (round(gamma*N) = " +
                                std::to_string(n_test) + " of " + std::to_string(n_rows) + ")");
  return n_test;
}

inline std::vector<Index> complement(std::span<const Index> chosen, Index n_rows) {
  std::vector<char> in(static_cast<std::size_t>(n_rows), 0);
  for (Index r : chosen) in[static_cast<std::size_t>(r)] = 1;
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n_rows) - chosen.size());
  for (Index r = 0; r < n_rows; ++r)
    if (!in[static_cast<std::size_t>(r)]) out.push_back(r);
  return out;
}

inline Matrix take_rows(const Matrix& m, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

inline void sort_indices(SplitResult& r) {
  std::sort(r.test_indices.begin(), r.test_indices.end());
  std::sort(r.train_indices.begin(), r.train_indices.end());
}

// Fills diagnostics from the encoded space; best-effort when no encoding is
// available (e.g. random splits of data the coding cannot encode).
inline void fill_diagnostics(SplitResult& r, const Dataset& data, CodingScheme scheme,
                             std::span<const Index> d1) {
  try {
    const StandardizedMatrix enc = encode(data, scheme);
    r.diagnostics.energy =
        two_sample_energy(take_rows(enc.values, r.test_indices), enc.values);
    r.diagnostics.objective = sp_objective(take_rows(enc.values, d1), enc.values);
  } catch (const std::exception&) {
    // leave NaN
  }
}

}  // namespace detail

/// Sequential nearest-neighbor extraction: for each point in order, pick the
/// nearest live data row, emit it, and remove it from the index. Returns n
/// distinct row indices in point order.
inline std::vector<Index> sequential_nn_subsample(const Matrix& points, const Matrix& data) {
  if (points.rows() > data.rows())
    throw std::invalid_argument("sequential_nn_subsample: more points than rows");
  NNIndex index(data);
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    const auto [row, dist] = index.nearest(points.row(i));
    (void)dist;
    out.push_back(row);
    index.remove(row);
  }
  return out;
}

/// SPlit: support points of the encoded dataset, then sequential
/// nearest-neighbor subsampling. The support points are fitted with
/// n = min(round(gamma*N), N - round(gamma*N)); the extracted rows become
/// the testing set when round(gamma*N) <= N/2 and the training set
/// otherwise.
inline SplitResult split(const Dataset& data, double gamma, const SolverConfig& cfg = {},
                         CodingScheme scheme = CodingScheme::Helmert) {
  const Index N = data.rows();
  const Index n_test = detail::checked_test_count(gamma, N);
  const Index n = std::min(n_test, N - n_test);

  const StandardizedMatrix enc = encode(data, scheme);
  SolverConfig solver_cfg = cfg;
  solver_cfg.n = n;
  solver_cfg.fixed = Matrix();
  const SolverReport report = fit_support_points(enc.values, solver_cfg);
  const std::vector<Index> d1 = sequential_nn_subsample(report.points, enc.values);

  SplitResult result;
  result.method = "split";
  result.gamma = gamma;
  result.seed = cfg.seed;
  if (n_test <= N - n_test) {
    result.test_indices = d1;
    result.train_indices = detail::complement(d1, N);
  } else {
    result.train_indices = d1;
    result.test_indices = detail::complement(d1, N);
  }
  detail::sort_indices(result);
  result.diagnostics.iterations = report.iterations;
  result.diagnostics.converged = report.converged;
  result.diagnostics.energy =
      two_sample_energy(detail::take_rows(enc.values, result.test_indices), enc.values);
  result.diagnostics.objective =
      sp_objective(detail::take_rows(enc.values, d1), enc.values);
  return result;
}

/// Uniform sample without replacement of round(gamma*N) rows as the test set.
inline SplitResult random_split(const Dataset& data, double gamma, std::uint64_t seed,
                                CodingScheme scheme = CodingScheme::Helmert) {
  const Index N = data.rows();
  const Index n_test = detail::checked_test_count(gamma, N);
  Rng rng(seed);
  const auto sampled = sample_without_replacement(N, n_test, rng);
  SplitResult result;
  result.method = "random";
  result.gamma = gamma;
  result.seed = seed;
  result.test_indices.assign(sampled.begin(), sampled.end());
  result.train_indices = detail::complement(result.test_indices, N);
  detail::sort_indices(result);
  detail::fill_diagnostics(result, data, scheme, result.test_indices);
  return result;
}

/// Proportional stratified sampling: per-level test counts by
/// largest-remainder apportionment of n*N_i/N, then uniform sampling within
/// each level.
inline SplitResult stratified_split(const Dataset& data, double gamma,
                                    const std::string& label_column, std::uint64_t seed,
                                    CodingScheme scheme = CodingScheme::Helmert) {
  const Index N = data.rows();
  const Index n_test = detail::checked_test_count(gamma, N);
  const Index c = data.column_index(label_column);
  const auto& schema = data.schema[static_cast<std::size_t>(c)];
  if (schema.kind != ColumnKind::Categorical)
    throw std::invalid_argument("stratified_split: label column must be categorical");
  const auto& level = data.columns[static_cast<std::size_t>(c)].level;

  const std::size_t m = schema.levels.size();
  std::vector<std::vector<Index>> members(m);
  for (Index r = 0; r < N; ++r) members[static_cast<std::size_t>(level[static_cast<std::size_t>(r)])].push_back(r);

  // Largest-remainder apportionment of the per-level quotas.
  std::vector<Index> quota(m, 0);
  std::vector<std::pair<double, std::size_t>> remainder;
  Index assigned = 0;
  for (std::size_t l = 0; l < m; ++l) {
    const double exact = static_cast<double>(n_test) * static_cast<double>(members[l].size()) /
                         static_cast<double>(N);
    quota[l] = static_cast<Index>(std::floor(exact));
    assigned += quota[l];
    remainder.emplace_back(exact - std::floor(exact), l);
  }
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (Index k = 0; k < n_test - assigned; ++k) quota[remainder[static_cast<std::size_t>(k)].second] += 1;

  Rng rng(seed);
  SplitResult result;
  result.method = "stratified";
  result.gamma = gamma;
  result.seed = seed;
  for (std::size_t l = 0; l < m; ++l) {
    const auto pick = sample_without_replacement(static_cast<Index>(members[l].size()), quota[l], rng);
    for (auto i : pick) result.test_indices.push_back(members[l][static_cast<std::size_t>(i)]);
  }
  result.train_indices = detail::complement(result.test_indices, N);
  detail::sort_indices(result);
  detail::fill_diagnostics(result, data, scheme, result.test_indices);
  return result;
}

/// Kennard-Stone (CADEX) selection: seed the test set with the two mutually
/// farthest rows in encoded space, then repeatedly add the row with the
/// largest minimum distance to the chosen set. Deterministic; ties go to the
/// smallest row index.
inline SplitResult cadex_split(const Dataset& data, double gamma,
                               CodingScheme scheme = CodingScheme::Helmert) {
  const Index N = data.rows();
  const Index n_test = detail::checked_test_count(gamma, N);
  if (n_test < 2) throw std::invalid_argument("cadex_split: round(gamma*N) >= 2 required");
  const StandardizedMatrix enc = encode(data, scheme);
  const Matrix& z = enc.values;

  Index a = 0, b = 1;
  double best = -1.0;
  for (Index i = 0; i < N; ++i)
    for (Index j = i + 1; j < N; ++j) {
      const double d2 = (z.row(i) - z.row(j)).squaredNorm();
      if (d2 > best) {
        best = d2;
        a = i;
        b = j;
      }
    }

  std::vector<char> chosen(static_cast<std::size_t>(N), 0);
  std::vector<double> min_d2(static_cast<std::size_t>(N));
  std::vector<Index> test = {a, b};
  chosen[static_cast<std::size_t>(a)] = chosen[static_cast<std::size_t>(b)] = 1;
  for (Index r = 0; r < N; ++r)
    min_d2[static_cast<std::size_t>(r)] = std::min((z.row(r) - z.row(a)).squaredNorm(),
                                                   (z.row(r) - z.row(b)).squaredNorm());
  while (static_cast<Index>(test.size()) < n_test) {
    Index pick = -1;
    double far = -1.0;
    for (Index r = 0; r < N; ++r) {
      if (chosen[static_cast<std::size_t>(r)]) continue;
      if (min_d2[static_cast<std::size_t>(r)] > far) {
        far = min_d2[static_cast<std::size_t>(r)];
        pick = r;
      }
    }
    chosen[static_cast<std::size_t>(pick)] = 1;
    test.push_back(pick);
    for (Index r = 0; r < N; ++r)
      if (!chosen[static_cast<std::size_t>(r)])
        min_d2[static_cast<std::size_t>(r)] =
            std::min(min_d2[static_cast<std::size_t>(r)], (z.row(r) - z.row(pick)).squaredNorm());
  }

  SplitResult result;
  result.method = "cadex";
  result.gamma = gamma;
  result.test_indices = std::move(test);
  result.train_indices = detail::complement(result.test_indices, N);
  detail::sort_indices(result);
  result.diagnostics.energy =
      two_sample_energy(detail::take_rows(z, result.test_indices), z);
  result.diagnostics.objective =
      sp_objective(detail::take_rows(z, result.test_indices), z);
  return result;
}

/// DUPLEX selection: the farthest remaining pair seeds the test set, the
/// next farthest pair seeds the train set, then the sets alternately receive
/// the remaining row with the largest minimum distance to themselves. Test
/// intake stops at round(gamma*N); leftovers go to train.
inline SplitResult duplex_split(const Dataset& data, double gamma,
                                CodingScheme scheme = CodingScheme::Helmert) {
  const Index N = data.rows();
  const Index n_test = detail::checked_test_count(gamma, N);
  if (n_test < 2) throw std::invalid_argument("duplex_split: round(gamma*N) >= 2 required");
  const StandardizedMatrix enc = encode(data, scheme);
  const Matrix& z = enc.values;
  const Index n_train = N - n_test;

  std::vector<char> assigned(static_cast<std::size_t>(N), 0);
  std::vector<Index> test, train;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d2_test(static_cast<std::size_t>(N), inf);
  std::vector<double> d2_train(static_cast<std::size_t>(N), inf);

  auto add = [&](Index r, std::vector<Index>& set, std::vector<double>& d2_set) {
    assigned[static_cast<std::size_t>(r)] = 1;
    set.push_back(r);
    for (Index s = 0; s < N; ++s)
      if (!assigned[static_cast<std::size_t>(s)])
        d2_set[static_cast<std::size_t>(s)] =
            std::min(d2_set[static_cast<std::size_t>(s)], (z.row(s) - z.row(r)).squaredNorm());
  };
  auto farthest_pair = [&](Index& a, Index& b) {
    double best = -1.0;
    a = b = -1;
    for (Index i = 0; i < N; ++i) {
      if (assigned[static_cast<std::size_t>(i)]) continue;
      for (Index j = i + 1; j < N; ++j) {
        if (assigned[static_cast<std::size_t>(j)]) continue;
        const double d2 = (z.row(i) - z.row(j)).squaredNorm();
        if (d2 > best) {
          best = d2;
          a = i;
          b = j;
        }
      }
    }
  };
  auto best_remaining = [&](const std::vector<double>& d2_set) {
    Index pick = -1;
    double far = -1.0;
    for (Index r = 0; r < N; ++r) {
      if (assigned[static_cast<std::size_t>(r)]) continue;
      if (d2_set[static_cast<std::size_t>(r)] > far) {
        far = d2_set[static_cast<std::size_t>(r)];
        pick = r;
      }
    }
    return pick;
  };

  Index a, b;
  farthest_pair(a, b);
  add(a, test, d2_test);
  add(b, test, d2_test);
  if (n_train >= 2 && static_cast<Index>(test.size()) < n_test) {
    farthest_pair(a, b);
    add(a, train, d2_train);
    add(b, train, d2_train);
  }
  while (static_cast<Index>(test.size() + train.size()) < N) {
    if (static_cast<Index>(test.size()) >= n_test) {
      for (Index r = 0; r < N; ++r)
        if (!assigned[static_cast<std::size_t>(r)]) {
          assigned[static_cast<std::size_t>(r)] = 1;
          train.push_back(r);
        }
      break;
    }
    if (static_cast<Index>(train.size()) >= n_train) {
      for (Index r = 0; r < N; ++r)
        if (!assigned[static_cast<std::size_t>(r)]) {
          assigned[static_cast<std::size_t>(r)] = 1;
          test.push_back(r);
        }
      break;
    }
    add(best_remaining(d2_test), test, d2_test);
    if (static_cast<Index>(test.size() + train.size()) < N &&
        static_cast<Index>(train.size()) < n_train)
      add(best_remaining(d2_train), train, d2_train);
  }

  SplitResult result;
  result.method = "duplex";
  result.gamma = gamma;
  result.test_indices = std::move(test);
  result.train_indices = std::move(train);
  detail::sort_indices(result);
  result.diagnostics.energy =
      two_sample_energy(detail::take_rows(z, result.test_indices), z);
  result.diagnostics.objective =
      sp_objective(detail::take_rows(z, result.test_indices), z);
  return result;
}

/// Conditional SPlit over the training rows of an existing split: support
/// points are fitted over the encoded training rows with the encoded test
/// rows held fixed, so the extracted validation rows stay representative
/// while keeping away from the test set. Returns a partition of the
/// training set with the validation rows in the `test_indices` slot.
inline SplitResult validation_split(const Dataset& data, const SplitResult& existing,
                                    Index n_valid, const SolverConfig& cfg = {},
                                    CodingScheme scheme = CodingScheme::Helmert) {
  const Index n_train = static_cast<Index>(existing.train_indices.size());
  if (n_valid < 1 || n_valid > n_train - 1)
    throw std::invalid_argument("validation_split: need 1 <= n_valid <= |train| - 1");

  const StandardizedMatrix enc = encode(data, scheme);
  const Matrix train_rows = detail::take_rows(enc.values, existing.train_indices);
  const Matrix test_rows = detail::take_rows(enc.values, existing.test_indices);

  SolverConfig solver_cfg = cfg;
  solver_cfg.n = n_valid;
  solver_cfg.fixed = test_rows;
  const SolverReport report = fit_support_points(train_rows, solver_cfg);
  const std::vector<Index> local = sequential_nn_subsample(report.points, train_rows);

  SplitResult result;
  result.method = "validation";
  result.gamma = static_cast<double>(n_valid) / static_cast<double>(n_train);
  result.seed = cfg.seed;
  for (Index l : local) result.test_indices.push_back(existing.train_indices[static_cast<std::size_t>(l)]);
  {
    std::vector<char> taken(static_cast<std::size_t>(n_train), 0);
    for (Index l : local) taken[static_cast<std::size_t>(l)] = 1;
    for (Index l = 0; l < n_train; ++l)
      if (!taken[static_cast<std::size_t>(l)])
        result.train_indices.push_back(existing.train_indices[static_cast<std::size_t>(l)]);
  }
  detail::sort_indices(result);
  result.diagnostics.iterations = report.iterations;
  result.diagnostics.converged = report.converged;
  result.diagnostics.energy =
      two_sample_energy(detail::take_rows(enc.values, result.test_indices), train_rows);
  result.diagnostics.objective =
      sp_objective(detail::take_rows(enc.values, result.test_indices), train_rows);
  return result;
}

/// Partitions the training rows into K folds of near-equal size (sizes
/// differ by at most one) by repeated conditional splitting: each round
/// fixes the non-training rows plus all previously extracted folds and
/// extracts the next fold from the remaining rows; the last fold is the
/// remainder.
inline FoldAssignment kfold(const Dataset& data, std::span<const Index> train, Index K,
                            const SolverConfig& cfg = {},
                            CodingScheme scheme = CodingScheme::Helmert) {
  const Index n_train = static_cast<Index>(train.size());
  if (K < 2 || K > n_train) throw std::invalid_argument("kfold: need 2 <= K <= |train|");

  const StandardizedMatrix enc = encode(data, scheme);
  std::vector<Index> remaining(train.begin(), train.end());
  std::sort(remaining.begin(), remaining.end());
  std::vector<Index> fixed_rows = detail::complement(remaining, data.rows());

  FoldAssignment out;
  for (Index k = 0; k + 1 < K; ++k) {
    const Index size = n_train / K + (k < n_train % K ? 1 : 0);
    SolverConfig solver_cfg = cfg;
    solver_cfg.n = size;
    solver_cfg.seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(k));
    solver_cfg.fixed = detail::take_rows(enc.values, fixed_rows);
    const Matrix pool = detail::take_rows(enc.values, remaining);
    const SolverReport report = fit_support_points(pool, solver_cfg);
    const std::vector<Index> local = sequential_nn_subsample(report.points, pool);

    std::vector<char> taken(remaining.size(), 0);
    std::vector<Index> fold;
    fold.reserve(static_cast<std::size_t>(size));
    for (Index l : local) {
      fold.push_back(remaining[static_cast<std::size_t>(l)]);
      taken[static_cast<std::size_t>(l)] = 1;
    }
    std::sort(fold.begin(), fold.end());
    std::vector<Index> rest;
    rest.reserve(remaining.size() - fold.size());
    for (std::size_t l = 0; l < remaining.size(); ++l)
      if (!taken[l]) rest.push_back(remaining[l]);
    fixed_rows.insert(fixed_rows.end(), fold.begin(), fold.end());
    out.folds.push_back(std::move(fold));
    remaining = std::move(rest);
  }
  out.folds.push_back(remaining);
  return out;
}

/// write_split on a SplitResult.
inline void write_split(const Dataset& data, const SplitResult& result,
                        const std::string& test_path, const std::string& train_path) {
  write_split(data, result.test_indices, result.train_indices, test_path, train_path);
}

}  // namespace splitkit
