#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "css/baselines.hpp"
#include "css/datagen.hpp"
#include "css/metrics.hpp"
#include "test_util.hpp"

using namespace css;
using css::testing::columns_at;
using css::testing::random_gaussian;

namespace {

ObservationMask full_mask(Index r, Index c) { return ObservationMask(r, c, true); }

}  // namespace

TEST_CASE("block_omp_css: fully observed diagonal picks by correlation") {
  Matrix m = Matrix::Zero(2, 2);
  m.diagonal() << 2, 1;
  const auto sel = block_omp_css(m, full_mask(2, 2), 2);
  REQUIRE(sel.indices.size() == 2);
  CHECK(sel.indices[0] == 0);  // row norms of D are (4, 1)
  CHECK(sel.indices[1] == 1);
}

TEST_CASE("block_omp_css: dominant orthogonal column wins at s = 1") {
  Matrix m = random_gaussian(10, 6, 1);
  m.col(4).setZero();
  m(9, 4) = 50.0;  // dominant and orthogonal to the rest
  for (Index j = 0; j < 6; ++j)
    if (j != 4) m(9, j) = 0.0;
  const auto sel = block_omp_css(m, full_mask(10, 6), 1);
  CHECK(sel.indices[0] == 4);
}

TEST_CASE("block_omp_css: s distinct indices, residual norms nonincreasing") {
  const Matrix m = random_gaussian(12, 10, 3);
  const auto mask = full_mask(12, 10);

  // Residual-norm monotonicity re-derived step by step.
  Matrix residual = m;
  OrthoBasis basis(12);
  const auto sel = block_omp_css(m, mask, 6);
  double prev = residual.norm();
  for (Index idx : sel.indices) {
    basis.insert(m.col(idx));
    const Matrix& q = basis.basis();
    residual = m - q * (q.transpose() * m);
    CHECK(residual.norm() <= prev + 1e-10);
    prev = residual.norm();
  }
  std::set<Index> unique(sel.indices.begin(), sel.indices.end());
  CHECK(unique.size() == 6);

  CHECK_THROWS_AS(block_omp_css(Matrix::Zero(3, 3), full_mask(3, 3), 1), DegenerateInputError);
}

TEST_CASE("block_omp_css degrades on the coherent design (paired Monte Carlo)") {
  SyntheticSpec spec;
  spec.n1 = spec.n2 = 40;
  spec.k = 8;
  spec.sigma = 0.1;
  spec.repeated = 5;
  spec.scale = 10.0;
  spec.seed = 9;
  const Matrix m = gen_coherent(spec);

  std::vector<double> omp_errors, iter_errors;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    MatrixOracle o1(m, 100 + seed);
    const auto mask = ObservationMask::bernoulli(40, 40, 0.5, o1.rng());
    const Matrix masked = o1.masked_view(mask);
    const auto omp = block_omp_css(masked, mask, 8);
    omp_errors.push_back(selection_error(m, columns_at(m, omp.indices)));

    MatrixOracle o2(m, 200 + seed);
    IterNormConfig cfg;
    cfg.k = 8;
    cfg.m = 20.0;
    const auto iter = iterative_norm_css(o2, cfg);
    iter_errors.push_back(selection_error(m, columns_at(m, iter.c.indices)));
  }
  std::sort(omp_errors.begin(), omp_errors.end());
  std::sort(iter_errors.begin(), iter_errors.end());
  CHECK(omp_errors[4] > iter_errors[4]);  // medians: block OMP fails on coherence
}

TEST_CASE("group_lasso_css: large lambda kills every row") {
  const Matrix m = random_gaussian(8, 6, 11);
  const auto mask = full_mask(8, 6);
  GroupLassoConfig cfg;
  cfg.lambda = group_lasso_lambda_max(m) * 1.01;
  cfg.max_iters = 500;
  const auto result = group_lasso_css(m, mask, cfg);
  CHECK(result.x.norm() == 0.0);
  CHECK(result.selection.indices.empty());
  CHECK(result.kkt_residual <= 1e-9);
}

TEST_CASE("group_lasso_css: lambda = 0 matches constrained least squares") {
  const Matrix m = random_gaussian(10, 6, 13);  // full column rank a.s.
  const auto mask = full_mask(10, 6);
  GroupLassoConfig cfg;
  cfg.lambda = 0.0;
  cfg.max_iters = 300000;
  cfg.tol = 1e-16;
  const auto result = group_lasso_css(m, mask, cfg);

  // Independent oracle: per-column least squares over the other columns.
  double oracle_obj = 0.0;
  for (Index j = 0; j < 6; ++j) {
    Matrix others(10, 5);
    Index t = 0;
    for (Index i = 0; i < 6; ++i)
      if (i != j) others.col(t++) = m.col(i);
    const Vector w = pinv_apply(others, m.col(j));
    oracle_obj += (m.col(j) - others * w).squaredNorm();
  }
  CHECK(result.objective == doctest::Approx(oracle_obj).epsilon(1e-6));
  for (Index i = 0; i < 6; ++i) CHECK(result.x(i, i) == 0.0);
}

TEST_CASE("group_lasso_css: duplicate columns against the 1-D family oracle") {
  const Vector x = random_gaussian(7, 1, 17).col(0);
  Matrix m(7, 2);
  m.col(0) = x;
  m.col(1) = x;
  const double lambda = 0.3 * x.squaredNorm();
  GroupLassoConfig cfg;
  cfg.lambda = lambda;
  cfg.max_iters = 100000;
  cfg.tol = 1e-16;
  const auto result = group_lasso_css(m, full_mask(7, 2), cfg);

  // The objective is separable: per row, ||x||^2 (1-b)^2 + lambda |b|.
  // Grid search over the 1-D family of symmetric solutions.
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= 200000; ++g) {
    const double b = static_cast<double>(g) / 200000.0;
    const double obj = 2.0 * (x.squaredNorm() * (1.0 - b) * (1.0 - b) + lambda * b);
    best = std::min(best, obj);
  }
  CHECK(result.objective <= best + 1e-6);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      if (i == j) CHECK(result.x(i, j) == 0.0);
}

TEST_CASE("group_lasso_css: KKT residual small at moderate lambda") {
  const Matrix m = random_gaussian(12, 9, 19);
  GroupLassoConfig cfg;
  cfg.lambda = 0.05 * group_lasso_lambda_max(m);
  cfg.max_iters = 200000;
  cfg.tol = 1e-16;
  const auto result = group_lasso_css(m, full_mask(12, 9), cfg);
  CHECK(result.kkt_residual <= 1e-6);
  CHECK(result.converged);
}

TEST_CASE("group_lasso objective is monotone under backtracking") {
  const Matrix m = random_gaussian(10, 8, 23);
  const auto mask = full_mask(10, 8);
  GroupLassoConfig cfg;
  cfg.lambda = 0.1 * group_lasso_lambda_max(m);
  double prev = std::numeric_limits<double>::infinity();
  // Objective after 1, 2, 4, ..., 64 iterations is nonincreasing.
  for (Index iters = 1; iters <= 64; iters *= 2) {
    cfg.max_iters = iters;
    cfg.tol = 1e-18;
    const auto result = group_lasso_css(m, mask, cfg);
    CHECK(result.objective <= prev + 1e-10);
    prev = result.objective;
  }
}

TEST_CASE("group_lasso_path: warm-started grid reaches the target subset size") {
  const Matrix m = random_gaussian(14, 10, 29);
  const auto mask = full_mask(14, 10);
  GroupLassoConfig base;
  base.max_iters = 20000;
  base.tol = 1e-12;
  const auto path = group_lasso_path(m, mask, 4, 20, 1e-3, base);
  REQUIRE(!path.empty());
  CHECK(path.back().selection.indices.size() == 4);  // truncated to target_s
  for (std::size_t i = 1; i < path.size(); ++i) CHECK(path[i].lambda < path[i - 1].lambda);
}
