#pragma once

#include "splitkit/core.hpp"
#include "splitkit/dataset.hpp"

#include <limits>
#include <string>
#include <vector>

namespace splitkit {

struct ColumnTransform {
  double mean = 0.0;
  double scale = 1.0;  // sample standard deviation (N-1 denominator)
  bool constant = false;
};

/// Where an encoded column block came from. Contrast-coded blocks keep the
/// standardized level points so rows can be decoded back to their level by
/// nearest-point lookup.
struct EncodedColumn {
  std::string source;
  ColumnKind kind = ColumnKind::Continuous;
  Index offset = 0;
  Index width = 1;
  std::vector<std::string> levels;
  Matrix level_points;  // m x (m-1), categorical blocks only
};

struct StandardizedMatrix {
  Matrix values;
  std::vector<ColumnTransform> transform;  // one entry per encoded column
  std::vector<EncodedColumn> column_map;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool all_equal(const Eigen::Ref<const Eigen::VectorXd>& v) {
  for (Index i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return false;
  return true;
}

// In-place column standardization; returns the transform applied.
inline ColumnTransform standardize_column(Eigen::Ref<Eigen::VectorXd> v,
                                          std::vector<std::string>* warnings,
                                          const std::string& name) {
  const Index n = v.size();
  ColumnTransform t;
  if (all_equal(v)) {
    t.mean = v[0];
    t.scale = 1.0;
    t.constant = true;
    v.setZero();
    if (warnings) warnings->push_back("column '" + name + "' is constant; centered only");
    return t;
  }
  t.mean = pairwise_sum(0, static_cast<std::size_t>(n),
                        [&](std::size_t i) { return v[static_cast<Index>(i)]; }) /
           static_cast<double>(n);
  const double ss = pairwise_sum(0, static_cast<std::size_t>(n), [&](std::size_t i) {
    const double c = v[static_cast<Index>(i)] - t.mean;
    return c * c;
  });
  t.scale = std::sqrt(ss / static_cast<double>(n - 1));
  for (Index i = 0; i < n; ++i) v[i] = (v[i] - t.mean) / t.scale;
  return t;
}

}  // namespace detail

/// Column-wise standardization of a raw numeric matrix: subtract the mean,
/// divide by the sample standard deviation. Constant columns are centered,
/// given scale 1, and flagged with a warning.
inline StandardizedMatrix standardize(const Matrix& data) {
  if (data.rows() < 2) throw std::invalid_argument("standardize: N >= 2 required");
  StandardizedMatrix out;
  out.values = data;
  out.transform.resize(static_cast<std::size_t>(data.cols()));
  for (Index c = 0; c < data.cols(); ++c) {
    Eigen::VectorXd col = out.values.col(c);
    out.transform[static_cast<std::size_t>(c)] =
        detail::standardize_column(col, &out.warnings, "col" + std::to_string(c));
    out.values.col(c) = col;
    EncodedColumn e;
    e.source = "col" + std::to_string(c);
    e.kind = ColumnKind::Continuous;
    e.offset = c;
    e.width = 1;
    out.column_map.push_back(std::move(e));
  }
  return out;
}

/// Maps standardized values back to the original scale. Exact only for
/// non-constant continuous-derived columns; constant columns recover their
/// original constant.
inline Matrix inverse_transform(const StandardizedMatrix& s) {
  Matrix out = s.values;
  for (Index c = 0; c < out.cols(); ++c) {
    const auto& t = s.transform[static_cast<std::size_t>(c)];
    out.col(c) = (out.col(c) * t.scale).array() + t.mean;
  }
  return out;
}

/// Level of an encoded categorical block, recovered as the nearest
/// standardized level point (smallest level id on ties).
inline Index decode_level(const EncodedColumn& col,
                          const Eigen::Ref<const Eigen::RowVectorXd>& encoded_row) {
  if (col.level_points.rows() == 0)
    throw std::invalid_argument("decode_level: column has no level points");
  Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index l = 0; l < col.level_points.rows(); ++l) {
    const double d = (col.level_points.row(l) - encoded_row).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = l;
    }
  }
  return best;
}

}  // namespace splitkit
