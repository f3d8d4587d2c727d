#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "css/dense_core.hpp"
#include "css/oracle.hpp"
#include "test_util.hpp"

using namespace css;
using css::testing::random_gaussian;

TEST_CASE("orthonormal_basis: collinear columns collapse to one direction") {
  Matrix cols(3, 2);
  cols << 1, 2, 0, 0, 0, 0;
  const OrthoBasis basis = orthonormal_basis(cols);
  REQUIRE(basis.dim() == 1);
  CHECK(std::abs(std::abs(basis.basis()(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(basis.basis()(1, 0)) < 1e-12);
}

TEST_CASE("orthonormal_basis: identity input keeps full dimension") {
  const OrthoBasis basis = orthonormal_basis(Matrix::Identity(3, 3));
  CHECK(basis.dim() == 3);
}

TEST_CASE("orthonormal_basis: random 8x4 is rank 4 with orthonormal output") {
  const Matrix cols = random_gaussian(8, 4, 11);
  const OrthoBasis basis = orthonormal_basis(cols);
  REQUIRE(basis.dim() == 4);
  const Matrix gram = basis.basis().transpose() * basis.basis();
  CHECK((gram - Matrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("orthonormal_basis: all-zero input yields dim 0, bad args throw") {
  CHECK(orthonormal_basis(Matrix::Zero(4, 3)).dim() == 0);
  CHECK_THROWS_AS(orthonormal_basis(Matrix(0, 0)), ParameterError);
  CHECK_THROWS_AS(orthonormal_basis(Matrix::Identity(2, 2), 0.0), ParameterError);
}

TEST_CASE("truncated_svd: diagonal and rank-1 cases") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  const SvdResult r = truncated_svd(d, 2);
  CHECK(r.sigma(0) == doctest::Approx(3.0));
  CHECK(r.sigma(1) == doctest::Approx(2.0));

  const Vector u = random_gaussian(5, 1, 3).col(0);
  const Vector v = random_gaussian(4, 1, 4).col(0);
  const Matrix rank1 = u * v.transpose();
  const SvdResult r1 = truncated_svd(rank1, 1);
  CHECK(r1.sigma(0) == doctest::Approx(u.norm() * v.norm()));
  const Matrix m1 = r1.u * r1.sigma.asDiagonal() * r1.v.transpose();
  CHECK((rank1 - m1).norm() < 1e-10);
}

TEST_CASE("truncated_svd: tail identity against an independent full SVD") {
  const Matrix m = random_gaussian(6, 6, 7);
  const SvdResult r = truncated_svd(m, 3);
  const Matrix m3 = r.u * r.sigma.asDiagonal() * r.v.transpose();

  Eigen::JacobiSVD<Matrix> full(m);  // independent decomposition route
  double tail = 0.0;
  for (Index i = 3; i < 6; ++i) tail += full.singularValues()(i) * full.singularValues()(i);
  CHECK((m - m3).squaredNorm() == doctest::Approx(tail).epsilon(1e-8));

  CHECK_THROWS_AS(truncated_svd(m, 0), ParameterError);
  CHECK_THROWS_AS(truncated_svd(m, 7), ParameterError);
}

TEST_CASE("truncated_svd orthonormal factors, nonincreasing spectrum") {
  const Matrix m = random_gaussian(7, 5, 9);
  const SvdResult r = truncated_svd(m, 4);
  CHECK((r.u.transpose() * r.u - Matrix::Identity(4, 4)).norm() < 1e-10);
  CHECK((r.v.transpose() * r.v - Matrix::Identity(4, 4)).norm() < 1e-10);
  for (Index i = 1; i < 4; ++i) CHECK(r.sigma(i) <= r.sigma(i - 1) + 1e-15);
  CHECK(r.sigma(3) >= 0.0);
}

TEST_CASE("project_residual basics") {
  OrthoBasis e1(2);
  e1.insert(Vector::Unit(2, 0));
  Vector x(2);
  x << 1, 1;
  const Vector r = project_residual(x, e1);
  CHECK(r(0) == doctest::Approx(0.0));
  CHECK(r(1) == doctest::Approx(1.0));

  const Vector inside = 3.0 * Vector::Unit(2, 0);
  CHECK(project_residual(inside, e1).norm() < 1e-12);

  OrthoBasis empty(2);
  Vector y(2);
  y << 3, 4;
  CHECK((project_residual(y, empty) - y).norm() == 0.0);
}

TEST_CASE("project_residual: idempotence and Pythagoras on random data") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix cols = random_gaussian(10, 4, 100 + seed);
    const OrthoBasis basis = orthonormal_basis(cols);
    const Vector x = random_gaussian(10, 1, 200 + seed).col(0);
    const Vector r = project_residual(x, basis);
    CHECK((project_residual(r, basis) - r).norm() < 1e-10);
    for (Index j = 0; j < basis.dim(); ++j)
      CHECK(std::abs(basis.basis().col(j).dot(r)) < 1e-10);
    const double projected = x.squaredNorm() - r.squaredNorm();
    const Vector p = x - r;
    CHECK(projected == doctest::Approx(p.squaredNorm()).epsilon(1e-8));
  }
}

TEST_CASE("pinv_apply: unit column and invertible square cases") {
  Matrix c(2, 1);
  c << 1, 0;
  const Matrix x = pinv_apply(c, Matrix::Identity(2, 2));
  REQUIRE(x.rows() == 1);
  REQUIRE(x.cols() == 2);
  CHECK(x(0, 0) == doctest::Approx(1.0));
  CHECK(x(0, 1) == doctest::Approx(0.0));

  const Matrix m = random_gaussian(4, 4, 21);
  const Matrix xi = pinv_apply(m, m);
  CHECK((m * xi - m).norm() < 1e-10);
  CHECK((xi - Matrix::Identity(4, 4)).norm() < 1e-8);
}

TEST_CASE("pinv_apply agrees with per-column normal equations") {
  const Matrix c = random_gaussian(6, 3, 31);
  const Matrix m = random_gaussian(6, 5, 32);
  const Matrix x = pinv_apply(c, m);
  const Matrix gram = c.transpose() * c;
  for (Index j = 0; j < m.cols(); ++j) {
    const Vector w = gram.llt().solve(c.transpose() * m.col(j));
    CHECK((x.col(j) - w).norm() < 1e-8);
  }
  // C X is the orthogonal projection of M onto span(C).
  const OrthoBasis basis = orthonormal_basis(c);
  const Matrix q = basis.basis();
  CHECK((c * x - q * (q.transpose() * m)).norm() < 1e-8 * m.norm());
}

TEST_CASE("pinv_apply minimality: perturbations never help") {
  const Matrix c = random_gaussian(6, 3, 41);
  const Matrix m = random_gaussian(6, 4, 42);
  const Matrix x = pinv_apply(c, m);
  const double base = (m - c * x).norm();
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const Matrix dx = 0.1 * random_gaussian(3, 4, 500 + seed);
    CHECK((m - c * (x + dx)).norm() >= base - 1e-10);
  }
}

TEST_CASE("subsample_scale: direct evaluation and edge cases") {
  Vector x(3);
  x << 2, 4, 6;
  IndexSet omega{3, {0, 2}};
  const Vector r = subsample_scale(x, omega);
  CHECK(r(0) == doctest::Approx(3.0));
  CHECK(r(1) == doctest::Approx(0.0));
  CHECK(r(2) == doctest::Approx(9.0));

  IndexSet all{3, {0, 1, 2}};
  CHECK((subsample_scale(x, all) - x).norm() == 0.0);

  IndexSet empty{3, {}};
  CHECK_THROWS_AS(subsample_scale(x, empty), ParameterError);
}

TEST_CASE("subsample_scale is unbiased under Bernoulli sets (Monte Carlo)") {
  const Index n = 30;
  const Vector x = random_gaussian(n, 1, 77).col(0);
  MatrixOracle oracle(Matrix::Identity(n, n), 7);  // only used for its index-set stream
  const int draws = 10000;
  Vector sum = Vector::Zero(n);
  Vector sumsq = Vector::Zero(n);
  for (int d = 0; d < draws; ++d) {
    const IndexSet omega = oracle.bernoulli_index_set(n, 0.5);
    Vector r = Vector::Zero(n);
    if (!omega.empty()) r = subsample_scale(x, omega);
    sum += r;
    sumsq += r.cwiseProduct(r);
  }
  for (Index i = 0; i < n; ++i) {
    const double mean = sum(i) / draws;
    const double var = sumsq(i) / draws - mean * mean;
    const double sd_mean = std::sqrt(std::max(var, 0.0) / draws);
    CHECK(std::abs(mean - x(i)) <= 3.0 * sd_mean + 1e-9);
  }
}

TEST_CASE("SVD optimality: no k-column reconstruction beats M_k") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix m = random_gaussian(8, 8, 900 + seed);
    Rng rng(seed);
    for (Index k = 1; k <= 3; ++k) {
      std::vector<Index> picks;
      while (static_cast<Index>(picks.size()) < k) {
        const Index j = static_cast<Index>(rng.below(8));
        if (std::find(picks.begin(), picks.end(), j) == picks.end()) picks.push_back(j);
      }
      const Matrix c = css::testing::columns_at(m, picks);
      const Matrix a = c * pinv_apply(c, m);  // rank <= k, built from k columns
      CHECK(best_rank_k_error(m, k) <= (m - a).norm() + 1e-12);
    }
  }
}
