#pragma once

#include "splitkit/core.hpp"

#include <algorithm>
#include <vector>

namespace splitkit {

struct PolyModel {
  int degree = 0;
  Eigen::VectorXd theta;  // theta[k] multiplies x^k

  double operator()(double x) const {
    double acc = 0.0;
    for (Index k = theta.size() - 1; k >= 0; --k) acc = acc * x + theta[k];
    return acc;
  }
};

/// Least-squares polynomial fit of degree r via Householder QR on the
/// Vandermonde matrix.
inline PolyModel fit_polynomial(std::span<const double> x, std::span<const double> y, int r) {
  if (r < 0) throw std::invalid_argument("fit_polynomial: degree >= 0 required");
  if (x.size() != y.size()) throw std::invalid_argument("fit_polynomial: size mismatch");
  if (x.size() <= static_cast<std::size_t>(r))
    throw std::invalid_argument("fit_polynomial: need more points than the degree");
  std::vector<double> distinct(x.begin(), x.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < static_cast<std::size_t>(r) + 1)
    throw std::invalid_argument("fit_polynomial: rank deficiency (fewer distinct x than r+1)");

  const Index n = static_cast<Index>(x.size());
  Eigen::MatrixXd design(n, r + 1);
  Eigen::VectorXd rhs(n);
  for (Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= r; ++k) {
      design(i, k) = p;
      p *= x[static_cast<std::size_t>(i)];
    }
    rhs[i] = y[static_cast<std::size_t>(i)];
  }
  PolyModel model;
  model.degree = r;
  model.theta = design.householderQr().solve(rhs);
  return model;
}

/// Exact generalization error E_X[(X^2 - g(X))^2] + 1 for X ~ N(0,1),
/// evaluated by expanding the squared polynomial and summing Gaussian
/// moments E[X^k] (zero for odd k, (k-1)!! for even k).
inline double true_generalization_error(const PolyModel& model) {
  // h(x) = x^2 - g(x)
  const Index sz = std::max<Index>(model.theta.size(), 3);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(sz);
  for (Index k = 0; k < model.theta.size(); ++k) h[k] = -model.theta[k];
  h[2] += 1.0;

  const Index top = 2 * (sz - 1);
  std::vector<double> moment(static_cast<std::size_t>(top) + 1, 0.0);
  moment[0] = 1.0;
  for (Index k = 2; k <= top; k += 2)
    moment[static_cast<std::size_t>(k)] =
        moment[static_cast<std::size_t>(k - 2)] * static_cast<double>(k - 1);

  double expectation = 0.0;
  for (Index a = 0; a < sz; ++a)
    for (Index b = 0; b < sz; ++b)
      expectation += h[a] * h[b] * moment[static_cast<std::size_t>(a + b)];
  return expectation + 1.0;
}

/// Test-set estimate of the generalization error: the mean squared residual.
inline double estimate_generalization_error(const PolyModel& model, std::span<const double> x,
                                            std::span<const double> y) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("estimate_generalization_error: bad test set");
  const double sum = detail::pairwise_sum(0, x.size(), [&](std::size_t i) {
    const double r = y[i] - model(x[i]);
    return r * r;
  });
  return sum / static_cast<double>(x.size());
}

}  // namespace splitkit
