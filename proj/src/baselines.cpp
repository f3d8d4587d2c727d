#include "css/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace css {

namespace {

Matrix hadamard_mask(const Matrix& m, const ObservationMask& mask) {
  Matrix out = m;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!mask.at(i, j)) out(i, j) = 0.0;
  return out;
}

}  // namespace

ColumnSelection block_omp_css(const Matrix& masked, const ObservationMask& mask, Index s) {
  const Index n1 = masked.rows();
  const Index n2 = masked.cols();
  if (mask.rows != n1 || mask.cols != n2) throw ParameterError("block_omp_css: mask dimension mismatch");
  if (s < 1 || s > n2) throw ParameterError("block_omp_css: s out of range");
  if (masked.norm() == 0.0) throw DegenerateInputError("block_omp_css: all-zero masked matrix");

  ColumnSelection sel;
  sel.columns.resize(n1, 0);
  OrthoBasis basis(n1);
  Matrix residual = masked;
  std::vector<uint8_t> taken(static_cast<std::size_t>(n2), 0);

  for (Index t = 0; t < s; ++t) {
    const Matrix d = masked.transpose() * hadamard_mask(residual, mask);
    Index best = -1;
    double best_norm = -1.0;
    for (Index i = 0; i < n2; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      const double nrm = d.row(i).norm();
      if (nrm > best_norm) {  // strict: ties keep the lowest index
        best_norm = nrm;
        best = i;
      }
    }
    taken[static_cast<std::size_t>(best)] = 1;
    sel.indices.push_back(best);
    sel.columns.conservativeResize(Eigen::NoChange, sel.columns.cols() + 1);
    sel.columns.col(sel.columns.cols() - 1) = masked.col(best);
    basis.insert(masked.col(best));
    if (basis.dim() > 0) {
      const Matrix& q = basis.basis();
      residual -= q * (q.transpose() * residual);
    }
  }
  return sel;
}

double group_lasso_objective(const Matrix& a, const Matrix& x, double lambda) {
  double penalty = 0.0;
  for (Index i = 0; i < x.rows(); ++i) penalty += x.row(i).norm();
  return (a - a * x).squaredNorm() + lambda * penalty;
}

double group_lasso_kkt_residual(const Matrix& a, const Matrix& x, double lambda) {
  const Matrix grad = 2.0 * (a.transpose() * (a * x - a));
  double worst = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    Vector g = grad.row(i).transpose();
    Vector xi = x.row(i).transpose();
    g(i) = 0.0;  // the diagonal coordinate is pinned by the constraint
    xi(i) = 0.0;
    const double row_norm = xi.norm();
    double violation;
    if (row_norm > 0.0) {
      violation = (g + lambda / row_norm * xi).norm();
    } else {
      violation = std::max(0.0, g.norm() - lambda);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

double group_lasso_lambda_max(const Matrix& a) {
  const Matrix gram = a.transpose() * a;
  double lmax = 0.0;
  for (Index i = 0; i < gram.rows(); ++i) {
    Vector row = gram.row(i).transpose();
    row(i) = 0.0;
    lmax = std::max(lmax, 2.0 * row.norm());
  }
  return lmax;
}

namespace {

// Exact prox of lambda||.||_{1,2} + indicator{diag = 0}: zero the diagonal,
// then group soft-threshold each row.
void prox_rows(Matrix& z, double threshold) {
  for (Index i = 0; i < z.rows(); ++i) {
    z(i, i) = 0.0;
    const double nrm = z.row(i).norm();
    if (nrm <= threshold)
      z.row(i).setZero();
    else
      z.row(i) *= (1.0 - threshold / nrm);
  }
}

GroupLassoResult solve_group_lasso(const Matrix& a, const GroupLassoConfig& cfg, Matrix x0) {
  if (cfg.lambda < 0.0) throw ParameterError("group_lasso: lambda must be >= 0");
  if (!(cfg.tol > 0.0)) throw ParameterError("group_lasso: tol must be positive");
  if (cfg.step && !(*cfg.step > 0.0)) throw ParameterError("group_lasso: step must be positive");

  const Index n2 = a.cols();
  Matrix x = std::move(x0);
  const Matrix gram2 = 2.0 * (a.transpose() * a);  // Hessian of the smooth part
  const Matrix b2 = gram2;                         // 2 A^T A, reused as linear term

  // Smooth part f(X) = ||A - AX||_F^2, grad = 2 A^T (A X - A).
  auto grad_f = [&](const Matrix& xx) -> Matrix { return gram2 * xx - b2; };
  auto f = [&](const Matrix& xx) -> double { return (a - a * xx).squaredNorm(); };

  // Spectral-norm step seed via a few power iterations on A^T A.
  double lip = 0.0;
  {
    Vector v = Vector::Ones(n2) / std::sqrt(static_cast<double>(n2));
    for (int it = 0; it < 30; ++it) {
      Vector w = gram2 * v;
      const double nrm = w.norm();
      if (nrm == 0.0) break;
      v = w / nrm;
      lip = nrm;
    }
  }
  double eta = cfg.step ? *cfg.step : (lip > 0.0 ? 1.0 / lip : 1.0);

  GroupLassoResult result;
  result.lambda = cfg.lambda;
  double obj = group_lasso_objective(a, x, cfg.lambda);
  Index iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const Matrix g = grad_f(x);
    const double fx = f(x);
    Matrix next;
    while (true) {
      next = x - eta * g;
      prox_rows(next, eta * cfg.lambda);
      if (cfg.step) break;  // fixed step, no backtracking
      const Matrix diff = next - x;
      const double quad = fx + (g.array() * diff.array()).sum() + diff.squaredNorm() / (2.0 * eta);
      if (f(next) <= quad + 1e-14 * std::max(1.0, std::abs(quad))) break;
      eta *= 0.5;
    }
    x = std::move(next);
    const double new_obj = group_lasso_objective(a, x, cfg.lambda);
    const bool settled = std::abs(obj - new_obj) <= cfg.tol * std::max(1.0, std::abs(obj));
    obj = new_obj;
    if (settled) {
      result.converged = true;
      ++iter;
      break;
    }
  }

  result.x = x;
  result.objective = obj;
  result.iterations = iter;
  result.kkt_residual = group_lasso_kkt_residual(a, x, cfg.lambda);

  std::vector<std::pair<double, Index>> rows;  // (norm, index) of nonzero rows
  for (Index i = 0; i < x.rows(); ++i) {
    const double nrm = x.row(i).norm();
    if (nrm > 0.0) rows.emplace_back(nrm, i);
  }
  if (cfg.target_s > 0 && static_cast<Index>(rows.size()) > cfg.target_s) {
    std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) {
      return l.first > r.first || (l.first == r.first && l.second < r.second);
    });
    rows.resize(static_cast<std::size_t>(cfg.target_s));
  }
  std::vector<Index> picked;
  for (const auto& [nrm, i] : rows) picked.push_back(i);
  std::sort(picked.begin(), picked.end());

  result.selection.indices = picked;
  result.selection.columns.resize(a.rows(), static_cast<Index>(picked.size()));
  for (std::size_t t = 0; t < picked.size(); ++t)
    result.selection.columns.col(static_cast<Index>(t)) = a.col(picked[t]);
  return result;
}

}  // namespace

GroupLassoResult group_lasso_css(const Matrix& masked, const ObservationMask& mask,
                                 const GroupLassoConfig& cfg) {
  if (mask.rows != masked.rows() || mask.cols != masked.cols())
    throw ParameterError("group_lasso_css: mask dimension mismatch");
  return solve_group_lasso(masked, cfg, Matrix::Zero(masked.cols(), masked.cols()));
}

std::vector<GroupLassoResult> group_lasso_path(const Matrix& masked, const ObservationMask& mask,
                                               Index target_s, Index grid_size,
                                               double lambda_min_ratio,
                                               const GroupLassoConfig& base) {
  if (mask.rows != masked.rows() || mask.cols != masked.cols())
    throw ParameterError("group_lasso_path: mask dimension mismatch");
  if (grid_size < 1) throw ParameterError("group_lasso_path: grid_size must be >= 1");

  const double lmax = group_lasso_lambda_max(masked);
  if (lmax == 0.0) throw DegenerateInputError("group_lasso_path: zero design matrix");

  std::vector<GroupLassoResult> path;
  Matrix warm = Matrix::Zero(masked.cols(), masked.cols());
  for (Index g = 0; g < grid_size; ++g) {
    const double frac = grid_size == 1 ? 1.0
                                       : static_cast<double>(g) / static_cast<double>(grid_size - 1);
    GroupLassoConfig cfg = base;
    cfg.lambda = lmax * std::pow(lambda_min_ratio, frac);
    cfg.target_s = target_s;
    path.push_back(solve_group_lasso(masked, cfg, warm));
    warm = path.back().x;
    // Early exit once enough rows are active; later grid points only
    // densify the solution.
    Index active = 0;
    for (Index i = 0; i < warm.rows(); ++i)
      if (warm.row(i).norm() > 0.0) ++active;
    if (target_s > 0 && active >= target_s) break;
  }
  return path;
}

}  // namespace css
