#include <doctest.h>

#include "decomp/cholesky.hpp"
#include "decomp/error.hpp"
#include "decomp/graph.hpp"
#include "oracles.hpp"

using namespace decomp;

namespace {

/// Random sparse, strictly diagonally dominant symmetric matrix.
SparseSymmetric random_spd(std::size_t n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::vector<Triplet> t;
  std::vector<double> row_abs(n, 0.0);
  for (const auto& [i, j] : oracle::random_edges(n, density, false, rng)) {
    const double v = w(rng);
    t.push_back({j, i, v});
    row_abs[i] += std::abs(v);
    row_abs[j] += std::abs(v);
  }
  std::uniform_real_distribution<double> extra(0.1, 2.0);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, row_abs[i] + extra(rng)});
  return SparseSymmetric::from_triplets(n, t);
}

oracle::Dense permuted_product(const CholeskyFactor& f) {
  const auto l = f.dense_lower();
  const std::size_t n = l.size();
  oracle::Dense llt = oracle::zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) llt[i][j] += l[i][k] * l[j][k];
  return llt;
}

}  // namespace

TEST_CASE("cholesky of the identity") {
  const auto f = cholesky(SparseSymmetric::identity(5));
  const auto l = f.dense_lower();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(l[i][j] == (i == j ? 1.0 : 0.0));
  const std::vector<double> b{1, -2, 3, 0.5, 7};
  CHECK(solve(f, b) == b);
}

TEST_CASE("cholesky of a 2x2 matches the hand factorization") {
  const std::vector<Triplet> t{{0, 0, 4}, {1, 0, -1}, {1, 1, 4}};
  const auto f = cholesky(SparseSymmetric::from_triplets(2, t));
  const auto l = f.dense_lower();
  // Equal degrees: ordering keeps index order.
  CHECK(f.perm()[0] == 0);
  CHECK(l[0][0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l[1][0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(l[1][1] == doctest::Approx(std::sqrt(3.75)).epsilon(1e-15));
  const auto x = solve(f, std::vector<double>{3, 3});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.log_determinant() == doctest::Approx(std::log(15.0)).epsilon(1e-14));
}

TEST_CASE("cholesky rejects singular intrinsic structure") {
  const auto r = build_igmrf1_precision(lattice_graph(3, 3));
  try {
    cholesky(r);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot() < 9);
    CHECK(std::string(e.what()).find(std::to_string(e.pivot())) != std::string::npos);
  }
  CHECK_NOTHROW(cholesky(r.scaled_plus_identity(1.0, 1e-6)));
}

TEST_CASE("solve: simple diagonal systems") {
  const auto f = cholesky(SparseSymmetric::identity(2).scaled_plus_identity(2.0, 0.0));
  const auto x = solve(f, std::vector<double>{2, 4});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(solve(f, std::vector<double>{1, 2, 3}), DimensionError);
}

TEST_CASE("factor reconstructs the permuted matrix") {
  std::mt19937_64 rng(3);
  for (const std::size_t n : {1u, 2u, 7u, 20u, 45u}) {
    const auto a = random_spd(n, 0.15, rng);
    const CholeskyFactor f(a);
    const auto dense = a.to_dense();
    const auto llt = permuted_product(f);
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double pa = dense[f.perm()[i]][f.perm()[j]];
        err += (pa - llt[i][j]) * (pa - llt[i][j]);
        norm += pa * pa;
      }
    CHECK(std::sqrt(err / norm) <= 1e-10);
    const auto l = f.dense_lower();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(l[i][i] > 0.0);
      for (std::size_t j = i + 1; j < n; ++j) CHECK(l[i][j] == 0.0);
    }
  }
}

TEST_CASE("solve matches dense elimination and inverts multiplication") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = rep < 10 ? 10 : 50 + 15 * static_cast<std::size_t>(rep - 10);
    const auto a = random_spd(n, 4.0 / static_cast<double>(n), rng);
    const CholeskyFactor f(a);
    const auto b = oracle::random_vector(n, rng);
    if (n <= 60) {
      const auto ref = oracle::solve(a.to_dense(), b);
      CHECK(oracle::max_abs_diff(f.solve(b), ref) <= 1e-8 * std::max(1.0, oracle::max_abs(ref)));
    }
    const auto x = oracle::random_vector(n, rng);
    const auto back = f.solve(a.multiply(x));
    CHECK(oracle::max_abs_diff(back, x) <= 1e-8 * oracle::max_abs(x));
    const auto ax = a.multiply(f.solve(b));
    CHECK(oracle::max_abs_diff(ax, b) <= 1e-8 * oracle::max_abs(b));
  }
}

TEST_CASE("a reused factor gives the same answers as refactorizing") {
  std::mt19937_64 rng(23);
  const auto a = random_spd(60, 0.05, rng);
  const CholeskyFactor once(a);
  for (int k = 0; k < 10; ++k) {
    const auto b = oracle::random_vector(60, rng);
    CHECK(once.solve(b) == CholeskyFactor(a).solve(b));
  }
}

TEST_CASE("symbolic analysis is reusable across values on the same pattern") {
  const auto r = build_igmrf1_precision(lattice_graph(6, 5));
  const auto symbolic = SymbolicCholesky::analyze(r.scaled_plus_identity(1.0, 1.0));
  std::mt19937_64 rng(1);
  for (const double ku : {0.01, 1.0, 250.0}) {
    const auto a = r.scaled_plus_identity(ku, 3.0);
    const CholeskyFactor shared(symbolic, a);
    const CholeskyFactor fresh(a);
    const auto b = oracle::random_vector(30, rng);
    CHECK(oracle::max_abs_diff(shared.solve(b), fresh.solve(b)) <= 1e-12);
  }
  CHECK_THROWS_AS(CholeskyFactor(SymbolicCholesky::analyze(SparseSymmetric::identity(30)), r),
                  Error);
}

TEST_CASE("quad_form") {
  CHECK(quad_form(SparseSymmetric::identity(2), std::vector<double>{3, 4}) == 25.0);
  CHECK(quad_form(build_igmrf1_precision(AdjacencyGraph(2, {{0, 1}})), std::vector<double>{1, 0}) ==
        1.0);
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = random_spd(25, 0.2, rng);
    const auto x = oracle::random_vector(25, rng);
    const double ref = oracle::quad(a.to_dense(), x);
    CHECK(std::abs(quad_form(a, x) - ref) <= 1e-12 * std::abs(ref));
  }
  CHECK_THROWS_AS(quad_form(SparseSymmetric::identity(2), std::vector<double>{1}), DimensionError);
}

TEST_CASE("sample_gaussian_precision with the identity returns the raw normals") {
  const auto f = cholesky(SparseSymmetric::identity(6));
  Rng rng(99);
  const auto x = sample_gaussian_precision(f, std::vector<double>(6, 0.0), rng);
  Rng raw(99);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < 6; ++i) CHECK(x[i] == normal(raw));
  CHECK_THROWS_AS(sample_gaussian_precision(f, std::vector<double>(5, 0.0), rng), DimensionError);
}

TEST_CASE("sample_gaussian_precision: moments") {
  constexpr std::size_t draws = 100000;
  SUBCASE("4I has variance 1/4") {
    const auto f = cholesky(SparseSymmetric::identity(1).scaled_plus_identity(4.0, 0.0));
    Rng rng(2024);
    double s = 0.0, ss = 0.0;
    for (std::size_t k = 0; k < draws; ++k) {
      const double x = sample_gaussian_precision(f, std::vector<double>{0.0}, rng)[0];
      s += x;
      ss += x * x;
    }
    const double mean = s / draws;
    const double var = ss / draws - mean * mean;
    CHECK(std::abs(var - 0.25) <= 3.0 * 0.25 * std::sqrt(2.0 / (draws - 1)));
  }
  SUBCASE("2x2 precision has the inverse as covariance") {
    const std::vector<Triplet> t{{0, 0, 2}, {1, 0, -1}, {1, 1, 2}};
    const auto f = cholesky(SparseSymmetric::from_triplets(2, t));
    const oracle::Dense cov{{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}};
    const std::vector<double> mean{1.5, -0.5};
    Rng rng(7);
    double s[2] = {0, 0}, c[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t k = 0; k < draws; ++k) {
      const auto x = sample_gaussian_precision(f, mean, rng);
      for (int i = 0; i < 2; ++i) {
        s[i] += x[i];
        for (int j = 0; j < 2; ++j) c[i][j] += (x[i] - mean[i]) * (x[j] - mean[j]);
      }
    }
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(s[i] / draws - mean[i]) <= 3.0 * std::sqrt(cov[i][i] / draws));
      for (int j = 0; j < 2; ++j) {
        const double se = std::sqrt((cov[i][i] * cov[j][j] + cov[i][j] * cov[i][j]) / draws);
        CHECK(std::abs(c[i][j] / draws - cov[i][j]) <= 3.0 * se);
      }
    }
  }
}
