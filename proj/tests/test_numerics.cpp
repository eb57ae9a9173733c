#include <doctest.h>

#include <cmath>
#include <random>

#include "rmm/errors.hpp"
#include "rmm/numerics.hpp"
#include "test_support.hpp"

using namespace rmm;
using namespace rmm::numerics;
using rmm::testing::rel_diff;

namespace {

void check_eigen_contract(const Matrix& s, const EigenResult& e) {
  const std::size_t n = s.rows();
  const Matrix vtv = matmul_tn(e.vectors, e.vectors);
  CHECK(max_abs(subtract(vtv, Matrix::identity(n))) <= 1e-10);
  const double scale = std::max(1.0, std::abs(e.values[0]));
  for (std::size_t i = 0; i < n; ++i) {
    auto v = e.vectors.col(i);
    auto sv = matvec(s, v);
    for (std::size_t k = 0; k < n; ++k) sv[k] -= e.values[i] * v[k];
    CHECK(norm2(sv) <= 1e-8 * scale);
  }
  for (std::size_t i = 1; i < n; ++i) CHECK(e.values[i - 1] >= e.values[i]);
  Matrix lam(n, n);
  for (std::size_t i = 0; i < n; ++i) lam(i, i) = e.values[i];
  const Matrix recon = matmul(matmul(e.vectors, lam), e.vectors.transposed());
  CHECK(max_abs(subtract(s, recon)) <= 1e-8 * (1.0 + std::abs(e.values[0])));
}

}  // namespace

TEST_CASE("sym_eig on identity") {
  const auto e = sym_eig(Matrix::identity(3));
  for (double v : e.values) CHECK(v == doctest::Approx(1.0));
  check_eigen_contract(Matrix::identity(3), e);
}

TEST_CASE("sym_eig on a diagonal matrix returns permuted identity") {
  const Matrix s{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}};
  const auto e = sym_eig(s);
  CHECK(e.values == std::vector<double>{3, 2, 1});
  CHECK(std::abs(e.vectors(0, 0)) == 1.0);
  CHECK(std::abs(e.vectors(2, 1)) == 1.0);
  CHECK(std::abs(e.vectors(1, 2)) == 1.0);
}

TEST_CASE("sym_eig on [[2,1],[1,2]]") {
  const Matrix s{{2, 1}, {1, 2}};
  const auto e = sym_eig(s);
  CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(e.vectors(0, 0) * e.vectors(1, 0) > 0.0);
  check_eigen_contract(s, e);
}

TEST_CASE("sym_eig rejects non-symmetric and non-finite input") {
  CHECK_THROWS_AS(sym_eig(Matrix{{1, 2}, {0, 1}}), DataError);
  CHECK_THROWS_AS(sym_eig(Matrix{{1, NAN}, {NAN, 1}}), DataError);
  CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), DimensionError);
}

TEST_CASE("sym_eig contract on random symmetric and PSD matrices") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 7u, 25u, 60u}) {
    Matrix a = testing::random_matrix(rng, n, n);
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) = a(i, j) + a(j, i);
    check_eigen_contract(s, sym_eig(s));
    // rank-deficient PSD: eigenvalue clamp keeps the spectrum nonnegative
    const Matrix b = testing::random_matrix(rng, std::max<std::size_t>(n / 2, 1), n);
    const auto e = sym_eig(gram(b));
    for (double v : e.values) CHECK(v >= 0.0);
    check_eigen_contract(gram(b), e);
  }
}

TEST_CASE("thin_svd edge cases") {
  const auto z = thin_svd(Matrix(3, 2));
  for (double s : z.sigma) CHECK(s == 0.0);
  CHECK(z.rank == 0);
  CHECK(max_abs(subtract(matmul_tn(z.u, z.u), Matrix::identity(2))) <= 1e-12);

  const auto d = thin_svd(Matrix{{3, 0}, {0, 4}});
  CHECK(d.sigma[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(d.sigma[1] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("thin_svd rejects non-finite input") {
  CHECK_THROWS_AS(thin_svd(Matrix{{1, NAN}}), DataError);
}

TEST_CASE("thin_svd reconstructs and agrees with sym_eig of the Gram matrix") {
  std::mt19937_64 rng(5);
  const std::pair<std::size_t, std::size_t> shapes[] = {{5, 8}, {8, 5}, {1, 6}, {17, 17}, {64, 128}};
  for (auto [n, m] : shapes) {
    const Matrix a = testing::random_matrix(rng, n, m);
    const auto svd = thin_svd(a);
    const std::size_t k = std::min(n, m);
    REQUIRE(svd.sigma.size() == k);
    Matrix us = svd.u;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) us(i, j) *= svd.sigma[j];
    CHECK(max_abs(subtract(a, matmul(us, svd.v.transposed()))) <= 1e-8 * svd.sigma[0]);
    CHECK(max_abs(subtract(matmul_tn(svd.u, svd.u), Matrix::identity(k))) <= 1e-10);
    CHECK(max_abs(subtract(matmul_tn(svd.v, svd.v), Matrix::identity(k))) <= 1e-10);
    const auto e = sym_eig(gram(a));
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(rel_diff(svd.sigma[i], std::sqrt(e.values[i])) <= 1e-8);
      if (i > 0) CHECK(svd.sigma[i - 1] >= svd.sigma[i]);
    }
  }
}

TEST_CASE("thin_svd of a rank-deficient matrix completes U") {
  std::mt19937_64 rng(8);
  const Matrix a = matmul(testing::random_matrix(rng, 9, 3), testing::random_matrix(rng, 3, 6));
  const auto svd = thin_svd(a);
  CHECK(svd.rank == 3);
  CHECK(max_abs(subtract(matmul_tn(svd.u, svd.u), Matrix::identity(6))) <= 1e-10);
}

TEST_CASE("ridge_solve worked examples") {
  const Matrix x{{1}, {2}};
  const Matrix y{{1}, {2}};
  const auto exact = ridge_solve(x, y, 0.0);
  CHECK(exact.coef(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(exact.minimal_norm);
  const auto reg = ridge_solve(x, y, 1.0);
  CHECK(reg.coef(0, 0) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  const auto zero = ridge_solve(x, Matrix(2, 1), 0.3);
  CHECK(zero.coef(0, 0) == 0.0);
}

TEST_CASE("ridge_solve errors") {
  CHECK_THROWS_AS(ridge_solve(Matrix(0, 2), Matrix(0, 1), 1.0), DimensionError);
  CHECK_THROWS_AS(ridge_solve(Matrix(2, 1), Matrix(3, 1), 1.0), DimensionError);
  CHECK_THROWS_AS(ridge_solve(Matrix(2, 1), Matrix(2, 1), -1.0), ConfigError);
  CHECK_THROWS_AS(ridge_solve(Matrix{{NAN}}, Matrix{{1}}, 1.0), DataError);
}

TEST_CASE("ridge_solve satisfies the normal equations and matches explicit inversion") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> pd(1, 10);
  std::uniform_int_distribution<std::size_t> qd(1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = pd(rng);
    const std::size_t n = p + 5 + trial % 7;
    const std::size_t q = qd(rng);
    const double lambda = std::pow(10.0, -4.0 + (trial % 5));
    const Matrix x = testing::random_matrix(rng, n, p);
    const Matrix y = testing::random_matrix(rng, n, q);
    const auto r = ridge_solve(x, y, lambda);
    const Matrix oracle = testing::brute_force_ridge(x, y, lambda);
    CHECK(testing::max_abs_diff(r.coef, oracle) <= 1e-8 * std::max(1.0, max_abs(oracle)));
    Matrix lhs = gram(x);
    for (std::size_t i = 0; i < p; ++i) lhs(i, i) += lambda;
    const Matrix resid = subtract(matmul(lhs, r.coef), matmul_tn(x, y));
    CHECK(max_abs(resid) <= 1e-8 * std::max(1.0, max_abs(matmul_tn(x, y))));
  }
}

TEST_CASE("ridge_solve with lambda = 0 returns the minimal-norm solution") {
  std::mt19937_64 rng(3);
  const Matrix l = testing::random_matrix(rng, 12, 3);
  const Matrix r = testing::random_matrix(rng, 3, 6);
  const Matrix x = matmul(l, r);
  const Matrix y = testing::random_matrix(rng, 12, 2);
  const auto sol = ridge_solve(x, y, 0.0);
  CHECK(sol.minimal_norm);
  CHECK(sol.rank == 3);
  const Matrix oracle = matmul(testing::factored_pinv(l, r), y);
  CHECK(testing::max_abs_diff(sol.coef, oracle) <= 1e-7 * std::max(1.0, max_abs(oracle)));
}

TEST_CASE("ridge_solve_gram falls back when Cholesky fails") {
  const Matrix g{{-1, 0}, {0, 1}};
  const Matrix xty{{2}, {3}};
  const auto r = ridge_solve_gram(g, xty, 0.5);
  CHECK(r.method == RidgeResult::Method::Svd);
  CHECK(r.coef(0, 0) == doctest::Approx(4.0));
  CHECK(r.coef(1, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ridge_solve_gram(g, xty, 0.0), ConfigError);
}

TEST_CASE("numerics are deterministic") {
  std::mt19937_64 rng(9);
  const Matrix x = testing::random_matrix(rng, 40, 7);
  const Matrix y = testing::random_matrix(rng, 40, 3);
  CHECK(ridge_solve(x, y, 1e-3).coef == ridge_solve(x, y, 1e-3).coef);
  CHECK(ridge_solve(x, y, 0.0).coef == ridge_solve(x, y, 0.0).coef);
  CHECK(thin_svd(x).v == thin_svd(x).v);
}
