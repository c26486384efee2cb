#include "splitkit/energy.hpp"
#include "splitkit/rng.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

using namespace splitkit;

namespace {
Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.next_normal();
  return m;
}

Matrix shuffle_rows(const Matrix& m, Rng& rng) {
  std::vector<Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_index(i)]);
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(order[static_cast<std::size_t>(i)]);
  return out;
}
}  // namespace

TEST_CASE("sp_objective hand values") {
  Matrix z(1, 1), d(1, 1);
  z << 0.5;
  d << 0.5;
  CHECK(sp_objective(z, d) == 0.0);

  Matrix data(2, 1);
  data << -1, 1;
  Matrix point(1, 1);
  point << 0;
  CHECK(sp_objective(point, data) == Catch::Approx(2.0));

  Matrix two(2, 1);
  two << -1, 1;
  CHECK(sp_objective(two, data) == Catch::Approx(1.0));

  Matrix wrong(1, 2);
  CHECK_THROWS(sp_objective(wrong, data));
}

TEST_CASE("sp_objective equals the direct double sum") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const Matrix data = random_matrix(30, 3, rng);
    const Matrix points = random_matrix(7, 3, rng);
    CHECK(sp_objective(points, data) ==
          Catch::Approx(oracle::direct_sp_objective(points, data)).margin(1e-12));
  }
}

TEST_CASE("sp_objective at n=N reduces to the mean pairwise distance") {
  Rng rng(22);
  const Matrix data = random_matrix(40, 2, rng);
  double direct = 0.0;
  for (Index i = 0; i < data.rows(); ++i)
    for (Index j = 0; j < data.rows(); ++j) direct += (data.row(i) - data.row(j)).norm();
  direct /= static_cast<double>(data.rows() * data.rows());
  CHECK(sp_objective(data, data) == Catch::Approx(direct).margin(1e-12));
}

TEST_CASE("sp_objective is permutation invariant within 1e-12") {
  Rng rng(23);
  const Matrix data = random_matrix(200, 3, rng);
  const Matrix points = random_matrix(50, 3, rng);
  const double base = sp_objective(points, data);
  for (int t = 0; t < 5; ++t) {
    const double shuffled = sp_objective(shuffle_rows(points, rng), shuffle_rows(data, rng));
    CHECK(std::abs(shuffled - base) < 1e-12);
  }
}

TEST_CASE("energy quantities are isometry invariant") {
  Rng rng(24);
  const Matrix data = random_matrix(60, 2, rng);
  const Matrix points = random_matrix(15, 2, rng);
  const double base_obj = sp_objective(points, data);
  const double base_energy = two_sample_energy(points, data);
  for (int t = 0; t < 5; ++t) {
    const Matrix q = oracle::rotation2(rng.next_double() * 6.28);
    Eigen::RowVectorXd shift(2);
    shift << rng.next_normal(), rng.next_normal();
    Matrix data_t = data * q.transpose();
    Matrix points_t = points * q.transpose();
    data_t.rowwise() += shift;
    points_t.rowwise() += shift;
    CHECK(std::abs(sp_objective(points_t, data_t) - base_obj) < 1e-9);
    CHECK(std::abs(two_sample_energy(points_t, data_t) - base_energy) < 1e-9);
  }
}

TEST_CASE("two_sample_energy hand values and properties") {
  Matrix a(1, 1), b(1, 1);
  a << 0;
  b << 1;
  CHECK(two_sample_energy(a, b) == Catch::Approx(2.0));

  Rng rng(25);
  const Matrix same = random_matrix(20, 2, rng);
  CHECK(std::abs(two_sample_energy(same, shuffle_rows(same, rng))) < 1e-12);

  for (int t = 0; t < 100; ++t) {
    const Matrix x = random_matrix(5 + static_cast<Index>(rng.next_index(20)), 2, rng);
    const Matrix y = random_matrix(5 + static_cast<Index>(rng.next_index(20)), 2, rng);
    CHECK(two_sample_energy(x, y) >= -1e-12);
    CHECK(two_sample_energy(x, y) == Catch::Approx(two_sample_energy(y, x)).margin(1e-12));
  }

  CHECK_THROWS(two_sample_energy(Matrix(0, 2), same));
}

TEST_CASE("ks_statistic hand values") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({0}, {1}) == 1.0);
  CHECK(ks_statistic({1, 2}, {1, 2, 3, 4}) == Catch::Approx(0.5));
  CHECK_THROWS(ks_statistic({}, {1.0}));
}
