#include "css/dense_core.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace css {

bool OrthoBasis::insert(const Vector& x, double tol, double scale) {
  if (q_.rows() == 0) q_.resize(x.size(), 0);
  if (x.size() != q_.rows()) throw ParameterError("insert: vector/basis dimension mismatch");
  if (scale < 0.0) scale = x.norm();

  Vector r = x;
  if (q_.cols() > 0) {
    r.noalias() -= q_ * (q_.transpose() * r);
    r.noalias() -= q_ * (q_.transpose() * r);  // re-orthogonalization pass
  }
  const double rn = r.norm();
  if (rn <= tol * scale || rn == 0.0) return false;
  q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
  q_.col(q_.cols() - 1) = r / rn;
  return true;
}

Matrix OrthoBasis::rows(const IndexSet& omega) const {
  if (omega.universe != q_.rows()) throw ParameterError("OrthoBasis::rows: universe mismatch");
  Matrix sub(omega.size(), q_.cols());
  for (Index r = 0; r < omega.size(); ++r) sub.row(r) = q_.row(omega.indices[r]);
  return sub;
}

OrthoBasis orthonormal_basis(const Matrix& columns, double tol) {
  if (columns.rows() < 1 || columns.cols() < 1) throw ParameterError("orthonormal_basis: empty input");
  if (!(tol > 0.0)) throw ParameterError("orthonormal_basis: tol must be positive");
  double max_norm = 0.0;
  for (Index j = 0; j < columns.cols(); ++j) max_norm = std::max(max_norm, columns.col(j).norm());
  OrthoBasis basis(columns.rows());
  if (max_norm == 0.0) return basis;
  for (Index j = 0; j < columns.cols(); ++j) basis.insert(columns.col(j), tol, max_norm);
  return basis;
}

SvdResult truncated_svd(const Matrix& m, Index k) {
  const Index rmax = std::min(m.rows(), m.cols());
  if (k < 1 || k > rmax) throw ParameterError("truncated_svd: k out of range");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out;
  out.u = svd.matrixU().leftCols(k);
  out.sigma = svd.singularValues().head(k);
  out.v = svd.matrixV().leftCols(k);
  return out;
}

Vector project_residual(const Vector& x, const OrthoBasis& basis) {
  if (basis.dim() == 0) return x;
  if (x.size() != basis.ambient_dim()) throw ParameterError("project_residual: dimension mismatch");
  const Matrix& q = basis.basis();
  Vector r = x - q * (q.transpose() * x);
  r.noalias() -= q * (q.transpose() * r);
  return r;
}

Matrix pinv_apply(const Matrix& c, const Matrix& m, double tol) {
  if (c.rows() != m.rows()) throw ParameterError("pinv_apply: row count mismatch");
  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  Matrix ut_m = svd.matrixU().transpose() * m;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff)
      ut_m.row(i) /= sv(i);
    else
      ut_m.row(i).setZero();
  }
  return svd.matrixV() * ut_m;
}

Vector subsample_scale(const Vector& x, const IndexSet& omega) {
  if (omega.empty()) throw ParameterError("subsample_scale: empty index set");
  if (omega.universe != x.size()) throw ParameterError("subsample_scale: universe mismatch");
  Vector out = Vector::Zero(x.size());
  const double scale = static_cast<double>(x.size()) / static_cast<double>(omega.size());
  for (Index i : omega.indices) out(i) = scale * x(i);
  return out;
}

double best_rank_k_error(const Matrix& m, Index k) {
  const Index rmax = std::min(m.rows(), m.cols());
  if (k < 0) throw ParameterError("best_rank_k_error: negative k");
  if (k >= rmax) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  double tail = 0.0;
  for (Index i = k; i < sv.size(); ++i) tail += sv(i) * sv(i);
  return std::sqrt(tail);
}

}  // namespace css
