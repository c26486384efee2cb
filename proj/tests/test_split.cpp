#include "splitkit/generators.hpp"
#include "splitkit/split.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

using namespace splitkit;

namespace {

Dataset continuous_dataset(const Matrix& m) {
  Dataset d;
  d.n_rows = m.rows();
  d.schema.clear();
  d.columns.resize(static_cast<std::size_t>(m.cols()));
  for (Index c = 0; c < m.cols(); ++c) {
    d.schema.push_back({"v" + std::to_string(c), ColumnKind::Continuous, {}, {}});
    for (Index r = 0; r < m.rows(); ++r)
      d.columns[static_cast<std::size_t>(c)].numeric.push_back(m(r, c));
  }
  return d;
}

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.next_normal();
  return m;
}

void check_partition(const SplitResult& r, Index n_rows) {
  std::vector<char> seen(static_cast<std::size_t>(n_rows), 0);
  for (Index i : r.test_indices) {
    REQUIRE(i >= 0);
    REQUIRE(i < n_rows);
    REQUIRE_FALSE(seen[static_cast<std::size_t>(i)]);
    seen[static_cast<std::size_t>(i)] = 1;
  }
  for (Index i : r.train_indices) {
    REQUIRE(i >= 0);
    REQUIRE(i < n_rows);
    REQUIRE_FALSE(seen[static_cast<std::size_t>(i)]);
    seen[static_cast<std::size_t>(i)] = 1;
  }
  REQUIRE(static_cast<Index>(r.test_indices.size() + r.train_indices.size()) == n_rows);
}

SolverConfig quick_solver(std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.max_iter = 120;
  cfg.tol = 1e-6;
  return cfg;
}

}  // namespace

TEST_CASE("sequential_nn_subsample extracts exact matches in point order") {
  Rng rng(51);
  const Matrix data = random_matrix(30, 2, rng);
  Matrix points(3, 2);
  points.row(0) = data.row(17);
  points.row(1) = data.row(4);
  points.row(2) = data.row(25);
  const auto got = sequential_nn_subsample(points, data);
  CHECK(got == std::vector<Index>{17, 4, 25});
}

TEST_CASE("sequential_nn_subsample forces distinct rows on duplicates") {
  Matrix data(4, 1);
  data << 5, 5, 1, 9;
  Matrix points(2, 1);
  points << 5, 5;
  const auto got = sequential_nn_subsample(points, data);
  CHECK(got == std::vector<Index>{0, 1});
}

TEST_CASE("sequential_nn_subsample matches the list-scan oracle") {
  Rng rng(52);
  const Matrix data = random_matrix(200, 2, rng);
  const Matrix points = random_matrix(20, 2, rng);
  CHECK(sequential_nn_subsample(points, data) ==
        oracle::brute_sequential_subsample(points, data));
}

TEST_CASE("split produces the requested sizes") {
  Rng rng(53);
  const Dataset data = continuous_dataset(random_matrix(120, 2, rng));
  const SplitResult r = split(data, 0.1, quick_solver(1));
  check_partition(r, 120);
  CHECK(r.test_indices.size() == 12);
  CHECK(r.method == "split");
  CHECK(r.diagnostics.energy >= 0.0);
  CHECK(r.diagnostics.iterations > 0);
}

TEST_CASE("split labels the subsample as train when gamma > 1/2") {
  Rng rng(54);
  const Dataset data = continuous_dataset(random_matrix(100, 2, rng));
  const SplitResult r = split(data, 0.8, quick_solver(2));
  check_partition(r, 100);
  // solver ran with n = min(80, 20) = 20 and D1 became the training set
  CHECK(r.train_indices.size() == 20);
  CHECK(r.test_indices.size() == 80);
}

TEST_CASE("split rejects degenerate ratios") {
  Rng rng(55);
  const Dataset data = continuous_dataset(random_matrix(30, 2, rng));
  CHECK_THROWS_WITH(split(data, 0.001, quick_solver(1)),
                    Catch::Matchers::ContainsSubstring("degenerate"));
  CHECK_THROWS_WITH(split(data, 0.999, quick_solver(1)),
                    Catch::Matchers::ContainsSubstring("degenerate"));
  CHECK_THROWS(split(data, 0.0, quick_solver(1)));
  CHECK_THROWS(split(data, 1.0, quick_solver(1)));
}

TEST_CASE("random_split is seeded and sized") {
  Rng rng(56);
  const Dataset data = continuous_dataset(random_matrix(1000, 2, rng));
  const SplitResult a = random_split(data, 0.2, 7);
  const SplitResult b = random_split(data, 0.2, 7);
  check_partition(a, 1000);
  CHECK(a.test_indices.size() == 200);
  CHECK(a.test_indices == b.test_indices);
}

TEST_CASE("random_split membership frequencies stay near gamma") {
  Rng rng(57);
  const Index n = 50;
  const double gamma = 0.3;
  const Dataset data = continuous_dataset(random_matrix(n, 1, rng));
  std::vector<int> hits(static_cast<std::size_t>(n), 0);
  const int seeds = 2000;
  for (int s = 0; s < seeds; ++s) {
    const SplitResult r = random_split(data, gamma, static_cast<std::uint64_t>(s + 1));
    for (Index i : r.test_indices) ++hits[static_cast<std::size_t>(i)];
  }
  const double p = 15.0 / 50.0;
  const double sigma = std::sqrt(p * (1 - p) / seeds);
  for (Index i = 0; i < n; ++i) {
    const double freq = hits[static_cast<std::size_t>(i)] / double(seeds);
    CAPTURE(i, freq);
    CHECK(std::abs(freq - p) <= 3.0 * sigma);
  }
}

TEST_CASE("stratified_split apportions by largest remainder") {
  // counts (16, 68, 16), n_test = 20 -> quotas (3, 14, 3)
  Rng rng(58);
  Dataset d;
  d.n_rows = 100;
  d.schema = {{"x", ColumnKind::Continuous, {}, {}},
              {"g", ColumnKind::Categorical, {"r", "g", "b"}, {}}};
  d.columns.resize(2);
  for (Index i = 0; i < 100; ++i) {
    d.columns[0].numeric.push_back(rng.next_normal());
    d.columns[1].level.push_back(i < 16 ? 0 : (i < 84 ? 1 : 2));
  }
  const SplitResult r = stratified_split(d, 0.2, "g", 3);
  check_partition(r, 100);
  std::map<int, int> counts;
  for (Index i : r.test_indices) ++counts[d.columns[1].level[static_cast<std::size_t>(i)]];
  CHECK(counts[0] == 3);
  CHECK(counts[1] == 14);
  CHECK(counts[2] == 3);

  CHECK_THROWS_WITH(stratified_split(d, 0.2, "x", 3),
                    Catch::Matchers::ContainsSubstring("categorical"));
}

TEST_CASE("stratified quotas always sum to the test size") {
  Rng rng(59);
  for (int t = 0; t < 100; ++t) {
    const Index m = 2 + static_cast<Index>(rng.next_index(5));
    std::vector<Index> counts(static_cast<std::size_t>(m));
    Index total = 0;
    for (auto& c : counts) {
      c = 1 + static_cast<Index>(rng.next_index(30));
      total += c;
    }
    Dataset d;
    d.n_rows = total;
    ColumnSchema s{"g", ColumnKind::Categorical, {}, {}};
    for (Index l = 0; l < m; ++l) s.levels.push_back("L" + std::to_string(l));
    d.schema = {{"x", ColumnKind::Continuous, {}, {}}, s};
    d.columns.resize(2);
    for (Index l = 0; l < m; ++l)
      for (Index k = 0; k < counts[static_cast<std::size_t>(l)]; ++k) {
        d.columns[0].numeric.push_back(rng.next_normal());
        d.columns[1].level.push_back(static_cast<int>(l));
      }
    const double gamma = 0.05 + 0.9 * rng.next_double();
    const Index n_test = static_cast<Index>(std::llround(gamma * static_cast<double>(total)));
    if (n_test < 1 || n_test > total - 1) continue;
    const SplitResult r = stratified_split(d, gamma, "g", rng.next_u64());
    check_partition(r, total);
    CHECK(static_cast<Index>(r.test_indices.size()) == n_test);
  }
}

TEST_CASE("single-level stratification behaves like a uniform sample") {
  Rng rng(60);
  Dataset d;
  d.n_rows = 40;
  d.schema = {{"x", ColumnKind::Continuous, {}, {}},
              {"g", ColumnKind::Categorical, {"only", "pad"}, {}}};
  d.columns.resize(2);
  for (Index i = 0; i < 40; ++i) {
    d.columns[0].numeric.push_back(rng.next_normal());
    d.columns[1].level.push_back(0);
  }
  d.columns[1].level[39] = 1;  // keep the contrast well-defined
  const SplitResult r = stratified_split(d, 0.25, "g", 11);
  check_partition(r, 40);
  CHECK(r.test_indices.size() == 10);
}

TEST_CASE("cadex picks the farthest pair then max-min additions") {
  Matrix m(11, 1);
  for (Index i = 0; i <= 10; ++i) m(i, 0) = static_cast<double>(i);
  const Dataset d = continuous_dataset(m);

  const SplitResult two = cadex_split(d, 2.0 / 11.0);
  CHECK(two.test_indices == std::vector<Index>{0, 10});

  const SplitResult three = cadex_split(d, 3.0 / 11.0);
  CHECK(three.test_indices == std::vector<Index>{0, 5, 10});

  const SplitResult again = cadex_split(d, 3.0 / 11.0);
  CHECK(again.test_indices == three.test_indices);

  CHECK_THROWS(cadex_split(d, 0.05));  // rounds to n_test < 2
}

TEST_CASE("duplex seeds the test set with the farthest pair") {
  Matrix m(11, 1);
  for (Index i = 0; i <= 10; ++i) m(i, 0) = static_cast<double>(i);
  const Dataset d = continuous_dataset(m);
  const SplitResult two = duplex_split(d, 2.0 / 11.0);
  CHECK(two.test_indices == std::vector<Index>{0, 10});
  check_partition(two, 11);
}

TEST_CASE("duplex partitions random instances deterministically") {
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const Index n = 6 + static_cast<Index>(rng.next_index(40));
    const Dataset d = continuous_dataset(random_matrix(n, 2, rng));
    const double gamma = 0.15 + 0.7 * rng.next_double();
    const Index n_test = static_cast<Index>(std::llround(gamma * static_cast<double>(n)));
    if (n_test < 2 || n_test > n - 1) continue;
    const SplitResult a = duplex_split(d, gamma);
    check_partition(a, n);
    CHECK(static_cast<Index>(a.test_indices.size()) == n_test);
    const SplitResult b = duplex_split(d, gamma);
    CHECK(a.test_indices == b.test_indices);
  }
}

TEST_CASE("validation_split draws from the training rows only") {
  const Dataset data = gen_quadratic(100, 99);
  const SplitResult base = split(data, 0.2, quick_solver(4));
  check_partition(base, 100);
  REQUIRE(base.train_indices.size() == 80);

  const SplitResult v = validation_split(data, base, 20, quick_solver(5));
  CHECK(v.method == "validation");
  CHECK(v.test_indices.size() == 20);
  CHECK(v.train_indices.size() == 60);
  std::set<Index> train_set(base.train_indices.begin(), base.train_indices.end());
  for (Index i : v.test_indices) CHECK(train_set.count(i) == 1);
  for (Index i : v.train_indices) CHECK(train_set.count(i) == 1);
  std::set<Index> all(v.test_indices.begin(), v.test_indices.end());
  all.insert(v.train_indices.begin(), v.train_indices.end());
  CHECK(all.size() == 80);

  CHECK_THROWS(validation_split(data, base, 80, quick_solver(5)));
  CHECK_THROWS(validation_split(data, base, 0, quick_solver(5)));
}

TEST_CASE("kfold partitions the training set into near-equal folds") {
  const Dataset data = gen_quadratic(100, 17);
  const SplitResult base = split(data, 0.2, quick_solver(6));

  const FoldAssignment k2 = kfold(data, base.train_indices, 2, quick_solver(7));
  REQUIRE(k2.folds.size() == 2);
  CHECK(k2.folds[0].size() == 40);
  CHECK(k2.folds[1].size() == 40);

  const FoldAssignment k5 = kfold(data, base.train_indices, 5, quick_solver(8));
  REQUIRE(k5.folds.size() == 5);
  for (const auto& f : k5.folds) CHECK(f.size() == 16);

  std::set<Index> seen;
  for (const auto& f : k5.folds) seen.insert(f.begin(), f.end());
  CHECK(seen.size() == 80);
  for (Index i : base.train_indices) CHECK(seen.count(i) == 1);

  CHECK_THROWS(kfold(data, base.train_indices, 1, quick_solver(8)));
  CHECK_THROWS(kfold(data, base.train_indices, 81, quick_solver(8)));
}

TEST_CASE("kfold covers uneven sizes across random instances") {
  Rng rng(62);
  for (int t = 0; t < 50; ++t) {
    const Index n = 12 + static_cast<Index>(rng.next_index(28));
    const Dataset d = continuous_dataset(random_matrix(n, 2, rng));
    std::vector<Index> train(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) train[static_cast<std::size_t>(i)] = i;
    const Index K = 2 + static_cast<Index>(rng.next_index(4));
    SolverConfig cfg = quick_solver(rng.next_u64());
    cfg.max_iter = 40;
    const FoldAssignment folds = kfold(d, train, K, cfg);
    REQUIRE(static_cast<Index>(folds.folds.size()) == K);
    std::set<Index> seen;
    Index mx = 0, mn = n;
    for (const auto& f : folds.folds) {
      seen.insert(f.begin(), f.end());
      mx = std::max(mx, static_cast<Index>(f.size()));
      mn = std::min(mn, static_cast<Index>(f.size()));
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));
    CHECK(mx - mn <= 1);
  }
}

TEST_CASE("three-class split keeps minority classes represented") {
  const Dataset d = gen_three_class(100, 12345);
  std::map<int, int> totals;
  for (int l : d.columns[2].level) ++totals[l];
  const SplitResult r = split(d, 0.2, quick_solver(13));
  check_partition(r, 100);
  std::map<int, int> counts;
  for (Index i : r.test_indices) ++counts[d.columns[2].level[static_cast<std::size_t>(i)]];
  // minority classes should land near their 20% share
  CHECK(counts[0] >= 1);
  CHECK(counts[2] >= 1);
}
