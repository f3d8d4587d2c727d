#pragma once

#include <optional>
#include <vector>

#include "css/oracle.hpp"
#include "css/samplers.hpp"

namespace css {

// Passive-sampling baselines. Both work on the zero-filled matrix W o M and
// never query the oracle.

// Block OMP: at each step correlates every original column against the masked
// residual, picks the row of D = Y^T (W o Y_t) with the largest norm, and
// projects the residual onto the complement of the selected columns' span.
// Already-selected columns are excluded from the argmax; ties break to the
// lowest index. The returned columns are the zero-filled ones (all a passive
// method observes).
ColumnSelection block_omp_css(const Matrix& masked, const ObservationMask& mask, Index s);

struct GroupLassoConfig {
  double lambda = 0.0;
  Index max_iters = 20000;
  std::optional<double> step;  // fixed step size; nullopt = backtracking
  double tol = 1e-12;          // relative objective change
  Index target_s = 0;          // truncate selection to this many rows (0 = keep all)
};

struct GroupLassoResult {
  ColumnSelection selection;
  Matrix x;  // n2 x n2, zero diagonal
  double lambda = 0.0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  Index iterations = 0;
  bool converged = false;
};

// min ||WoM - (WoM) X||_F^2 + lambda ||X||_{1,2}  s.t. diag(X) = 0,
// solved by proximal gradient with a row-wise group soft-threshold; the
// diagonal is projected to zero inside the prox (the exact prox of the
// constrained penalty). Nonzero rows of X are the selected columns, truncated
// to the target_s largest row norms when there are more.
GroupLassoResult group_lasso_css(const Matrix& masked, const ObservationMask& mask,
                                 const GroupLassoConfig& cfg);

// Geometric lambda grid with warm starts, from the row-wise kill threshold
// downward. Stand-in for a full solution-path solver.
std::vector<GroupLassoResult> group_lasso_path(const Matrix& masked, const ObservationMask& mask,
                                               Index target_s, Index grid_size = 20,
                                               double lambda_min_ratio = 1e-3,
                                               const GroupLassoConfig& base = {});

double group_lasso_objective(const Matrix& a, const Matrix& x, double lambda);

// Max over rows of the stationarity violation on the free (off-diagonal)
// coordinates: nonzero rows must satisfy g_i + lambda x_i/||x_i|| = 0, zero
// rows must satisfy ||g_i|| <= lambda.
double group_lasso_kkt_residual(const Matrix& a, const Matrix& x, double lambda);

// Smallest lambda for which X = 0 is optimal.
double group_lasso_lambda_max(const Matrix& a);

}  // namespace css
