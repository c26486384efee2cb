#pragma once

#include "splitkit/core.hpp"

#include <algorithm>
#include <vector>

namespace splitkit {

/// Support-points objective: the data-dependent part of the energy distance
/// between the point set and the empirical distribution of `data`,
///   2/(nN) sum_ij ||z_i - Z_j|| - 1/n^2 sum_ik ||z_i - z_k||.
/// All sums are pairwise-reduced.
inline double sp_objective(const Matrix& points, const Matrix& data) {
  if (points.cols() != data.cols())
    throw std::invalid_argument("sp_objective: dimension mismatch");
  if (points.rows() < 1 || data.rows() < 1)
    throw std::invalid_argument("sp_objective: empty input");
  const Index n = points.rows();
  const Index N = data.rows();

  std::vector<double> row(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    row[static_cast<std::size_t>(i)] =
        detail::pairwise_sum(0, static_cast<std::size_t>(N), [&](std::size_t j) {
          return detail::row_distance(points, i, data, static_cast<Index>(j));
        });
  const double attract = detail::pairwise_sum(row);

  for (Index i = 0; i < n; ++i)
    row[static_cast<std::size_t>(i)] =
        detail::pairwise_sum(0, static_cast<std::size_t>(n), [&](std::size_t k) {
          return detail::row_distance(points, i, points, static_cast<Index>(k));
        });
  const double repulse = detail::pairwise_sum(row);

  return 2.0 / (static_cast<double>(n) * static_cast<double>(N)) * attract -
         repulse / (static_cast<double>(n) * static_cast<double>(n));
}

/// Empirical two-sample energy distance,
///   2/(ab) sum ||a_i - b_j|| - 1/a^2 sum ||a_i - a_k|| - 1/b^2 sum ||b_j - b_l||.
/// Nonnegative; zero iff the two multisets carry the same empirical law.
inline double two_sample_energy(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("two_sample_energy: dimension mismatch");
  if (a.rows() < 1 || b.rows() < 1)
    throw std::invalid_argument("two_sample_energy: empty sample");
  const Index na = a.rows();
  const Index nb = b.rows();

  auto double_sum = [](const Matrix& x, const Matrix& y) {
    std::vector<double> row(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i)
      row[static_cast<std::size_t>(i)] =
          detail::pairwise_sum(0, static_cast<std::size_t>(y.rows()), [&](std::size_t j) {
            return detail::row_distance(x, i, y, static_cast<Index>(j));
          });
    return detail::pairwise_sum(row);
  };

  const double cross = double_sum(a, b);
  const double aa = double_sum(a, a);
  const double bb = double_sum(b, b);
  return 2.0 / (static_cast<double>(na) * static_cast<double>(nb)) * cross -
         aa / (static_cast<double>(na) * static_cast<double>(na)) -
         bb / (static_cast<double>(nb) * static_cast<double>(nb));
}

/// Two-sample Kolmogorov-Smirnov statistic: the sup-norm distance between
/// the empirical CDFs.
inline double ks_statistic(std::vector<double> sample, std::vector<double> reference) {
  if (sample.empty() || reference.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  std::sort(reference.begin(), reference.end());
  const double na = static_cast<double>(sample.size());
  const double nb = static_cast<double>(reference.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sample.size() || j < reference.size()) {
    double x;
    if (i == sample.size()) x = reference[j];
    else if (j == reference.size()) x = sample[i];
    else x = std::min(sample[i], reference[j]);
    while (i < sample.size() && sample[i] == x) ++i;
    while (j < reference.size() && reference[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace splitkit
