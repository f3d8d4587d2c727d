#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "css/metrics.hpp"
#include "test_util.hpp"

using namespace css;
using css::testing::columns_at;
using css::testing::random_gaussian;

TEST_CASE("selection_error on rank-1 and identity cases") {
  Matrix rank1(2, 2);
  rank1 << 1, 2, 2, 4;
  CHECK(selection_error(rank1, rank1.col(0)) < 1e-12);

  const Matrix eye = Matrix::Identity(2, 2);
  CHECK(selection_error(eye, eye.col(0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(selection_error(eye, Matrix(2, 0)), ParameterError);
}

TEST_CASE("selection_error agrees with the pseudoinverse route") {
  const Matrix m = random_gaussian(5, 5, 15);
  const Matrix c = m.leftCols(2);
  const Matrix x = pinv_apply(c, m);
  CHECK(selection_error(m, c) == doctest::Approx((m - c * x).norm()).epsilon(1e-8));
}

TEST_CASE("reconstruction_error basics") {
  const Matrix m = random_gaussian(6, 6, 16);
  const Matrix c = m.leftCols(3);
  const Matrix x = pinv_apply(c, m);
  CHECK(reconstruction_error(m, c, x) == doctest::Approx(selection_error(m, c)).epsilon(1e-8));
  CHECK(reconstruction_error(m, c, Matrix::Zero(3, 6)) == doctest::Approx(m.norm()));
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Matrix dx = 0.05 * random_gaussian(3, 6, 700 + seed);
    CHECK(reconstruction_error(m, c, x + dx) > reconstruction_error(m, c, x));
  }
}

TEST_CASE("vector_incoherence closed-form values") {
  CHECK(vector_incoherence(Vector::Ones(4)) == doctest::Approx(1.0));
  CHECK(vector_incoherence(Vector::Unit(4, 0)) == doctest::Approx(4.0));
  Vector half(4);
  half << 1, 1, 0, 0;
  CHECK(vector_incoherence(half) == doctest::Approx(2.0));
  CHECK_THROWS_AS(vector_incoherence(Vector::Zero(3)), ParameterError);
}

TEST_CASE("subspace_incoherence closed-form values") {
  OrthoBasis spike(4);
  spike.insert(Vector::Unit(4, 0));
  CHECK(subspace_incoherence(spike) == doctest::Approx(4.0));

  OrthoBasis flat(4);
  flat.insert(Vector::Ones(4));
  CHECK(subspace_incoherence(flat) == doctest::Approx(1.0));

  const OrthoBasis full = orthonormal_basis(Matrix::Identity(5, 5));
  CHECK(subspace_incoherence(full) == doctest::Approx(1.0));

  OrthoBasis empty(4);
  CHECK_THROWS_AS(subspace_incoherence(empty), ParameterError);
}

TEST_CASE("row_leverage_scores on known spectra") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  const Vector scores = row_leverage_scores(d, 2);
  CHECK(scores(0) == doctest::Approx(1.0));
  CHECK(scores(1) == doctest::Approx(1.0));
  CHECK(scores(2) == doctest::Approx(0.0).epsilon(1e-10));

  const Vector u = random_gaussian(5, 1, 31).col(0);
  const Vector v = random_gaussian(6, 1, 32).col(0);
  const Vector s1 = row_leverage_scores(u * v.transpose(), 1);
  for (Index j = 0; j < 6; ++j)
    CHECK(s1(j) == doctest::Approx(v(j) * v(j) / v.squaredNorm()).epsilon(1e-8));

  const Matrix m = random_gaussian(6, 8, 33);
  CHECK(row_leverage_scores(m, 3).sum() == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("row_leverage_scores flags degenerate spectra") {
  bool degenerate = false;
  row_leverage_scores(Matrix::Identity(4, 4), 2, &degenerate);
  CHECK(degenerate);
  degenerate = true;
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  row_leverage_scores(d, 2, &degenerate);
  CHECK_FALSE(degenerate);
}

TEST_CASE("leverage scores match V_k from an independent SVD realization") {
  const Matrix m = random_gaussian(6, 7, 34);
  const Vector scores = row_leverage_scores(m, 3);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
  const Matrix vk = svd.matrixV().leftCols(3);
  for (Index j = 0; j < 7; ++j)
    CHECK(scores(j) == doctest::Approx(vk.row(j).squaredNorm()).epsilon(1e-8));
}

TEST_CASE("volume_sampling_distribution on 2x2 diagonals") {
  const auto even = volume_sampling_distribution(Matrix::Identity(2, 2), 1);
  CHECK(even.prob_of({0}) == doctest::Approx(0.5));
  CHECK(even.prob_of({1}) == doctest::Approx(0.5));

  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2, 1;
  const auto skew = volume_sampling_distribution(d, 1);
  CHECK(skew.prob_of({0}) == doctest::Approx(0.8));
  CHECK(skew.prob_of({1}) == doctest::Approx(0.2));
}

TEST_CASE("volume distribution: probabilities sum to one, guards hold") {
  const Matrix m = random_gaussian(5, 6, 35);
  const auto dist = volume_sampling_distribution(m, 2);
  double total = 0.0;
  for (const auto& [subset, p] : dist.probs) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(volume_sampling_distribution(random_gaussian(3, 13, 36), 2), ParameterError);
  CHECK_THROWS_AS(volume_sampling_distribution(m, 5), ParameterError);
}

TEST_CASE("simplex volume permutation identity against the singular values") {
  const Matrix m = random_gaussian(5, 6, 37);
  // Unnormalized total volume via Gram determinants (independent route).
  double total_vol2 = 0.0;
  for (Index a = 0; a < 6; ++a)
    for (Index b = a + 1; b < 6; ++b) {
      Matrix c(5, 2);
      c.col(0) = m.col(a);
      c.col(1) = m.col(b);
      total_vol2 += (c.transpose() * c).determinant() / 4.0;  // (2!)^2
    }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector sv = svd.singularValues();
  double perm = 0.0;
  for (Index a = 0; a < 5; ++a)
    for (Index b = a + 1; b < 5; ++b) perm += sv(a) * sv(a) * sv(b) * sv(b);
  CHECK(total_vol2 == doctest::Approx(perm / 4.0).epsilon(1e-8));
}

TEST_CASE("selection error never beats the rank bound") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Matrix m = random_gaussian(6, 7, 1000 + seed);
    Rng rng(seed);
    const Index k = 1 + static_cast<Index>(rng.below(4));
    std::vector<Index> picks;
    while (static_cast<Index>(picks.size()) < k) {
      const Index j = static_cast<Index>(rng.below(7));
      if (std::find(picks.begin(), picks.end(), j) == picks.end()) picks.push_back(j);
    }
    const double err = selection_error(m, columns_at(m, picks));
    CHECK(err >= best_rank_k_error(m, k) - 1e-8);
  }
}

TEST_CASE("volume sampling expectation bound (exhaustive 5x6, k = 2)") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix m = random_gaussian(5, 6, 2000 + seed);
    const auto dist = volume_sampling_distribution(m, 2);
    double expectation = 0.0;
    for (const auto& [subset, p] : dist.probs) {
      const double err = selection_error(m, columns_at(m, subset));
      expectation += p * err * err;
    }
    const double oracle = best_rank_k_error(m, 2);
    CHECK(expectation <= 3.0 * oracle * oracle + 1e-8);
  }
}

TEST_CASE("make_error_report ratio and sentinel") {
  const Matrix eye = Matrix::Identity(2, 2);
  const auto report = make_error_report(eye, eye.col(0), nullptr, 2);
  CHECK(report.oracle_error == 0.0);
  CHECK(std::isinf(report.relative_ratio));

  const Matrix m = random_gaussian(5, 5, 51);
  const Matrix c = m.leftCols(2);
  const Matrix x = pinv_apply(c, m);
  const auto r2 = make_error_report(m, c, &x, 2);
  CHECK(r2.relative_ratio == doctest::Approx(r2.selection_error / r2.oracle_error));
  REQUIRE(r2.reconstruction_error.has_value());
  CHECK(*r2.reconstruction_error >= r2.selection_error - 1e-8);
}

TEST_CASE("leverage scores are a property of V, not preserved by right rotation") {
  const Matrix m = random_gaussian(6, 6, 61);
  const OrthoBasis qb = orthonormal_basis(random_gaussian(6, 6, 62));
  REQUIRE(qb.dim() == 6);
  const Matrix rotated = m * qb.basis();
  const Vector before = row_leverage_scores(m, 2);
  const Vector after = row_leverage_scores(rotated, 2);
  CHECK((before - after).norm() > 1e-3);
  CHECK(after.sum() == doctest::Approx(2.0).epsilon(1e-8));
}
