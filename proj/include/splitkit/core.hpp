#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitkit {

// Observations are rows; row-major keeps each row contiguous for the
// distance kernels.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

namespace detail {

// Pairwise (tree) reduction. Keeps the accumulated rounding error near
// log2(K)*eps so permuting ~1e6 terms moves the total by < 1e-12 relative.
template <class Term>
double pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
  const std::size_t len = hi - lo;
  if (len <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + len / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum(std::size_t{0}, v.size(), [&](std::size_t i) { return v[i]; });
}

inline double squared_distance(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

// Both arguments must be row-major so rows are contiguous.
inline double row_distance(const Matrix& a, Index i, const Matrix& b, Index j) {
  return std::sqrt(squared_distance(a.row(i).data(), b.row(j).data(), a.cols()));
}

// Shortest round-trip decimal form (17 significant digits).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

}  // namespace splitkit
