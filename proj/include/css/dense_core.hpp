#pragma once

#include <Eigen/Dense>
#include <vector>

#include "css/errors.hpp"

namespace css {

using Matrix = Eigen::MatrixXd;  // column-major
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative threshold for numerical rank decisions (basis acceptance and
// pseudoinverse truncation). Double precision, matrices up to a few thousand.
inline constexpr double kRankTol = 1e-10;

// Sorted, distinct positions in [0, universe).
struct IndexSet {
  Index universe = 0;
  std::vector<Index> indices;

  Index size() const { return static_cast<Index>(indices.size()); }
  bool empty() const { return indices.empty(); }
  bool full() const { return size() == universe; }
};

// Orthonormal column basis of a subspace of R^ambient, grown incrementally by
// Gram-Schmidt with one re-orthogonalization pass.
class OrthoBasis {
 public:
  OrthoBasis() = default;
  explicit OrthoBasis(Index ambient) : q_(ambient, 0) {}

  Index ambient_dim() const { return q_.rows(); }
  Index dim() const { return q_.cols(); }
  const Matrix& basis() const { return q_; }

  // Appends the direction of x if its residual against the current basis
  // exceeds tol * scale (scale < 0 means ||x||). Returns true when accepted.
  bool insert(const Vector& x, double tol = kRankTol, double scale = -1.0);

  // Rows of the basis restricted to omega: |omega| x dim.
  Matrix rows(const IndexSet& omega) const;

 private:
  Matrix q_;
};

struct SvdResult {
  Matrix u;      // n1 x k, orthonormal columns
  Vector sigma;  // k, nonincreasing, nonnegative
  Matrix v;      // n2 x k, orthonormal columns
};

// Orthonormal basis of the column span; columns whose residual after
// projection on previously accepted vectors is <= tol * (max column norm)
// are dropped. All-zero input yields dim 0.
OrthoBasis orthonormal_basis(const Matrix& columns, double tol = kRankTol);

// Rank-k truncation of a full SVD; sigma holds the top k singular values.
SvdResult truncated_svd(const Matrix& m, Index k);

// x - U(U^T x).
Vector project_residual(const Vector& x, const OrthoBasis& basis);

// X = C^+ M via SVD with singular values <= tol * sigma_max treated as zero.
Matrix pinv_apply(const Matrix& c, const Matrix& m, double tol = kRankTol);

// Rescaled subsampling operator: (n1/|omega|) * x on omega, zero elsewhere.
Vector subsample_scale(const Vector& x, const IndexSet& omega);

// ||M - M_k||_F from the tail singular values.
double best_rank_k_error(const Matrix& m, Index k);

// Frobenius distance helper.
inline double frob(const Matrix& m) { return m.norm(); }

}  // namespace css
