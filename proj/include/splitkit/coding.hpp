#pragma once

#include "splitkit/core.hpp"
#include "splitkit/dataset.hpp"
#include "splitkit/standardize.hpp"

#include <limits>
#include <string>
#include <vector>

namespace splitkit {

enum class CodingScheme { Helmert, Treatment, Sum, OrthogonalPolynomial };

inline const char* coding_name(CodingScheme s) {
  switch (s) {
    case CodingScheme::Helmert: return "helmert";
    case CodingScheme::Treatment: return "treatment";
    case CodingScheme::Sum: return "sum";
    case CodingScheme::OrthogonalPolynomial: return "polynomial";
  }
  return "?";
}

inline CodingScheme coding_from_name(const std::string& name) {
  if (name == "helmert") return CodingScheme::Helmert;
  if (name == "treatment") return CodingScheme::Treatment;
  if (name == "sum") return CodingScheme::Sum;
  if (name == "polynomial") return CodingScheme::OrthogonalPolynomial;
  throw std::invalid_argument("unknown coding scheme '" + name + "'");
}

/// m-1 dummy columns for an m-level factor. `raw` holds the integer-valued
/// contrast before level-standardization; `columns` is raw with each column
/// centered over the m levels and scaled to sample standard deviation 1
/// (m-1 denominator).
struct ContrastMatrix {
  CodingScheme scheme = CodingScheme::Helmert;
  Index m = 0;
  Matrix columns;
  Matrix raw;
  bool standardized = true;
};

namespace detail {

using int128 = __int128;

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline void check128(int128 v, Index m) {
  static const int128 limit = int128(1) << 100;
  if (abs128(v) >= limit)
    throw std::invalid_argument("orthogonal_polynomial_coding: m = " + std::to_string(m) +
                                " exceeds exact-arithmetic range");
}

// Exact Gram-Schmidt of the power columns (1..m)^k against the constant
// vector and each other, carried out in integer arithmetic so that the
// returned columns are integer-valued with exactly orthogonal dot products
// and exactly zero column sums.
inline std::vector<std::vector<long long>> integer_orthogonal_polynomials(Index m) {
  std::vector<std::vector<long long>> basis;  // accepted integer columns
  std::vector<long long> ones(static_cast<std::size_t>(m), 1);
  basis.push_back(ones);

  for (Index k = 1; k < m; ++k) {
    std::vector<int128> num(static_cast<std::size_t>(m));
    int128 den = 1;
    for (Index i = 0; i < m; ++i) {
      int128 p = 1;
      for (Index e = 0; e < k; ++e) p *= (i + 1);
      num[static_cast<std::size_t>(i)] = p;
    }
    for (const auto& u : basis) {
      int128 dot = 0;     // <v, u> * den
      int128 uu = 0;      // <u, u>
      for (Index i = 0; i < m; ++i) {
        dot += num[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        uu += int128(u[static_cast<std::size_t>(i)]) * u[static_cast<std::size_t>(i)];
      }
      // v <- v - dot/(den*uu) * u, over the common denominator den*uu
      int128 g = uu;
      for (Index i = 0; i < m; ++i) {
        int128& n = num[static_cast<std::size_t>(i)];
        n = n * uu - dot * u[static_cast<std::size_t>(i)];
        check128(n, m);
        g = gcd128(g, n);
      }
      den *= uu;
      check128(den, m);
      if (g > 1) {
        for (auto& n : num) n /= g;
        den /= g;
      }
    }
    // The denominator only scales the column; reduce the numerators to the
    // smallest integer representative.
    int128 g = 0;
    for (const auto& n : num) g = gcd128(g, n);
    if (g == 0)
      throw std::invalid_argument("orthogonal_polynomial_coding: degenerate power column");
    std::vector<long long> col(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      const int128 v = num[static_cast<std::size_t>(i)] / g;
      if (abs128(v) > (int128(1) << 53))
        throw std::invalid_argument("orthogonal_polynomial_coding: m = " + std::to_string(m) +
                                    " produces values beyond exact double range");
      col[static_cast<std::size_t>(i)] = static_cast<long long>(v);
    }
    basis.push_back(std::move(col));
  }

  basis.erase(basis.begin());  // drop the constant
  return basis;
}

inline Matrix raw_contrast(CodingScheme scheme, Index m) {
  Matrix raw = Matrix::Zero(m, m - 1);
  switch (scheme) {
    case CodingScheme::Treatment:
      for (Index j = 0; j + 1 < m; ++j) raw(j + 1, j) = 1.0;
      break;
    case CodingScheme::Sum:
      for (Index j = 0; j + 1 < m; ++j) {
        raw(j, j) = 1.0;
        raw(m - 1, j) = -1.0;
      }
      break;
    case CodingScheme::Helmert:
      for (Index j = 0; j + 1 < m; ++j) {
        for (Index i = 0; i <= j; ++i) raw(i, j) = -1.0;
        raw(j + 1, j) = static_cast<double>(j + 1);
      }
      break;
    case CodingScheme::OrthogonalPolynomial: {
      const auto cols = integer_orthogonal_polynomials(m);
      for (Index j = 0; j + 1 < m; ++j)
        for (Index i = 0; i < m; ++i)
          raw(i, j) = static_cast<double>(cols[static_cast<std::size_t>(j)]
                                              [static_cast<std::size_t>(i)]);
      break;
    }
  }
  return raw;
}

inline ContrastMatrix make_contrast(CodingScheme scheme, Index m) {
  if (m < 2) throw std::invalid_argument("contrast coding requires m >= 2 levels");
  ContrastMatrix c;
  c.scheme = scheme;
  c.m = m;
  c.raw = raw_contrast(scheme, m);
  c.columns = c.raw;
  for (Index j = 0; j < c.columns.cols(); ++j) {
    Eigen::VectorXd col = c.columns.col(j);
    standardize_column(col, nullptr, coding_name(scheme));
    c.columns.col(j) = col;
  }
  c.standardized = true;
  return c;
}

}  // namespace detail

inline ContrastMatrix treatment_coding(Index m) {
  return detail::make_contrast(CodingScheme::Treatment, m);
}
inline ContrastMatrix sum_coding(Index m) {
  return detail::make_contrast(CodingScheme::Sum, m);
}
inline ContrastMatrix helmert_coding(Index m) {
  return detail::make_contrast(CodingScheme::Helmert, m);
}
inline ContrastMatrix orthogonal_polynomial_coding(Index m) {
  return detail::make_contrast(CodingScheme::OrthogonalPolynomial, m);
}
inline ContrastMatrix make_coding(CodingScheme scheme, Index m) {
  return detail::make_contrast(scheme, m);
}

/// Average absolute pairwise correlation of the contrast columns,
/// sum_{i!=j} |r_ij| / ((m-1)(m-2)). Computed from the raw integer columns,
/// so codings with exactly orthogonal zero-sum columns report exactly 0.
inline double mean_abs_correlation(const ContrastMatrix& c) {
  if (c.m < 3)
    throw std::invalid_argument("mean_abs_correlation: requires m >= 3");
  const Index p = c.raw.cols();
  const double m = static_cast<double>(c.m);
  double total = 0.0;
  for (Index a = 0; a < p; ++a) {
    for (Index b = a + 1; b < p; ++b) {
      double sa = 0.0, sb = 0.0, sab = 0.0, saa = 0.0, sbb = 0.0;
      for (Index i = 0; i < c.m; ++i) {
        const double x = c.raw(i, a);
        const double y = c.raw(i, b);
        sa += x;
        sb += y;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
      }
      const double cov = sab - sa * sb / m;
      const double va = saa - sa * sa / m;
      const double vb = sbb - sb * sb / m;
      total += 2.0 * std::abs(cov == 0.0 ? 0.0 : cov / std::sqrt(va * vb));
    }
  }
  return total / ((m - 1.0) * (m - 2.0));
}

/// Minimum pairwise Euclidean distance among the m standardized level
/// points (rows of the contrast matrix).
inline double separation_distance(const ContrastMatrix& c) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < c.m; ++i)
    for (Index j = i + 1; j < c.m; ++j)
      best = std::min(best, (c.columns.row(i) - c.columns.row(j)).norm());
  return best;
}

/// Root of the mean squared distance from each point to its nearest center.
inline double within_rmse(const Matrix& points, const Matrix& centers) {
  if (points.rows() == 0) throw std::invalid_argument("within_rmse: empty point set");
  if (centers.rows() == 0) throw std::invalid_argument("within_rmse: no centers");
  for (Index i = 0; i < centers.rows(); ++i)
    for (Index j = i + 1; j < centers.rows(); ++j)
      if ((centers.row(i) - centers.row(j)).squaredNorm() == 0.0)
        throw std::invalid_argument("within_rmse: centers must be distinct");
  const double mse =
      detail::pairwise_sum(0, static_cast<std::size_t>(points.rows()), [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (Index l = 0; l < centers.rows(); ++l)
          best = std::min(best,
                          (points.row(static_cast<Index>(i)) - centers.row(l)).squaredNorm());
        return best;
      }) /
      static_cast<double>(points.rows());
  return std::sqrt(mse);
}

/// Numeric encoding of a dataset: continuous columns standardized over the
/// rows, ordinal columns mapped through their scores and then standardized,
/// and each m-level categorical column replaced by the m-1 level-standardized
/// contrast columns (dummy columns get no extra row standardization).
inline StandardizedMatrix encode(const Dataset& data, CodingScheme scheme) {
  detail::validate_dataset(data);
  Index width = 0;
  for (const auto& s : data.schema) {
    if (s.kind == ColumnKind::Categorical) {
      if (s.levels.size() < 2)
        throw std::invalid_argument("encode: categorical column '" + s.name +
                                    "' has a single level; no contrast exists");
      width += static_cast<Index>(s.levels.size()) - 1;
    } else {
      width += 1;
    }
  }

  StandardizedMatrix out;
  out.values.resize(data.rows(), width);
  out.transform.reserve(static_cast<std::size_t>(width));

  Index offset = 0;
  for (std::size_t c = 0; c < data.schema.size(); ++c) {
    const auto& s = data.schema[c];
    const auto& col = data.columns[c];
    EncodedColumn e;
    e.source = s.name;
    e.kind = s.kind;
    e.offset = offset;

    if (s.kind == ColumnKind::Categorical) {
      const ContrastMatrix contrast = detail::make_contrast(scheme, static_cast<Index>(s.levels.size()));
      e.width = contrast.columns.cols();
      e.levels = s.levels;
      e.level_points = contrast.columns;
      for (Index r = 0; r < data.rows(); ++r)
        out.values.block(r, offset, 1, e.width) =
            contrast.columns.row(col.level[static_cast<std::size_t>(r)]);
      for (Index j = 0; j < e.width; ++j) out.transform.push_back({0.0, 1.0, false});
      offset += e.width;
    } else {
      e.width = 1;
      Eigen::VectorXd v(data.rows());
      if (s.kind == ColumnKind::Continuous) {
        for (Index r = 0; r < data.rows(); ++r)
          v[r] = col.numeric[static_cast<std::size_t>(r)];
      } else {
        e.levels = s.levels;
        for (Index r = 0; r < data.rows(); ++r)
          v[r] = s.scores[static_cast<std::size_t>(col.level[static_cast<std::size_t>(r)])];
      }
      out.transform.push_back(detail::standardize_column(v, &out.warnings, s.name));
      out.values.col(offset) = v;
      offset += 1;
    }
    out.column_map.push_back(std::move(e));
  }
  return out;
}

}  // namespace splitkit
