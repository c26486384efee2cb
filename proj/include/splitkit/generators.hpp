#pragma once

#include "splitkit/core.hpp"
#include "splitkit/dataset.hpp"
#include "splitkit/rng.hpp"
#include "splitkit/standardize.hpp"

#include <string>
#include <vector>

namespace splitkit {

/// N iid draws from the bivariate normal with unit variances and
/// correlation 0.5.
inline Dataset gen_bivariate_normal(Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_bivariate_normal: N >= 2 required");
  Rng rng(seed);
  Dataset d;
  d.n_rows = n;
  d.schema = {{"x1", ColumnKind::Continuous, {}, {}}, {"x2", ColumnKind::Continuous, {}, {}}};
  d.columns.resize(2);
  d.columns[0].numeric.resize(static_cast<std::size_t>(n));
  d.columns[1].numeric.resize(static_cast<std::size_t>(n));
  const double root = std::sqrt(0.75);  // sqrt(1 - 0.5^2)
  for (Index i = 0; i < n; ++i) {
    const double z1 = rng.next_normal();
    const double z2 = rng.next_normal();
    d.columns[0].numeric[static_cast<std::size_t>(i)] = z1;
    d.columns[1].numeric[static_cast<std::size_t>(i)] = 0.5 * z1 + root * z2;
  }
  return d;
}

/// X ~ N(0,1), Y = X^2 + eps with eps ~ N(0,1).
inline Dataset gen_quadratic(Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_quadratic: N >= 2 required");
  Rng rng(seed);
  Dataset d;
  d.n_rows = n;
  d.schema = {{"x", ColumnKind::Continuous, {}, {}}, {"y", ColumnKind::Continuous, {}, {}}};
  d.columns.resize(2);
  d.columns[0].numeric.resize(static_cast<std::size_t>(n));
  d.columns[1].numeric.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double x = rng.next_normal();
    d.columns[0].numeric[static_cast<std::size_t>(i)] = x;
    d.columns[1].numeric[static_cast<std::size_t>(i)] = x * x + rng.next_normal();
  }
  return d;
}

/// X1 ~ N(0,1), X2|X1 ~ N(X1^2,1), both columns standardized, and a
/// three-level label assigned on the standardized values: Red where
/// 6*X1 + X2 + 6 < 0, Blue where -6*X1 + X2 + 6 < 0, Green otherwise.
inline Dataset gen_three_class(Index n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("gen_three_class: N >= 3 required");
  Rng rng(seed);
  Eigen::VectorXd x1(n), x2(n);
  for (Index i = 0; i < n; ++i) {
    x1[i] = rng.next_normal();
    x2[i] = x1[i] * x1[i] + rng.next_normal();
  }
  detail::standardize_column(x1, nullptr, "x1");
  detail::standardize_column(x2, nullptr, "x2");

  Dataset d;
  d.n_rows = n;
  d.schema = {{"x1", ColumnKind::Continuous, {}, {}},
              {"x2", ColumnKind::Continuous, {}, {}},
              {"class", ColumnKind::Categorical, {"Red", "Green", "Blue"}, {}}};
  d.columns.resize(3);
  d.columns[0].numeric.resize(static_cast<std::size_t>(n));
  d.columns[1].numeric.resize(static_cast<std::size_t>(n));
  d.columns[2].level.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    d.columns[0].numeric[static_cast<std::size_t>(i)] = x1[i];
    d.columns[1].numeric[static_cast<std::size_t>(i)] = x2[i];
    int label = 1;  // Green
    if (6.0 * x1[i] + x2[i] + 6.0 < 0.0) label = 0;        // Red
    else if (-6.0 * x1[i] + x2[i] + 6.0 < 0.0) label = 2;  // Blue
    d.columns[2].level[static_cast<std::size_t>(i)] = label;
  }
  return d;
}

/// Single categorical column with m levels, each level repeated
/// `replicates` times (levels grouped in order).
inline Dataset gen_replicated_levels(Index m, Index replicates) {
  if (m < 2 || replicates < 1)
    throw std::invalid_argument("gen_replicated_levels: need m >= 2 and replicates >= 1");
  Dataset d;
  d.n_rows = m * replicates;
  ColumnSchema s;
  s.name = "level";
  s.kind = ColumnKind::Categorical;
  for (Index l = 0; l < m; ++l) s.levels.push_back("L" + std::to_string(l + 1));
  d.schema = {s};
  d.columns.resize(1);
  auto& ids = d.columns[0].level;
  ids.reserve(static_cast<std::size_t>(d.n_rows));
  for (Index l = 0; l < m; ++l)
    for (Index r = 0; r < replicates; ++r) ids.push_back(static_cast<int>(l));
  return d;
}

}  // namespace splitkit
