#include "css/metrics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace css {

double VolumeDistribution::prob_of(const std::vector<Index>& subset) const {
  std::vector<Index> key = subset;
  std::sort(key.begin(), key.end());
  for (const auto& [s, p] : probs)
    if (s == key) return p;
  throw ParameterError("prob_of: subset not of the distribution's size");
}

double selection_error(const Matrix& m, const Matrix& c_columns) {
  if (c_columns.cols() < 1) throw ParameterError("selection_error: empty column subset");
  if (c_columns.rows() != m.rows()) throw ParameterError("selection_error: row mismatch");
  OrthoBasis basis = orthonormal_basis(c_columns);
  if (basis.dim() == 0) return m.norm();
  const Matrix& q = basis.basis();
  return (m - q * (q.transpose() * m)).norm();
}

double reconstruction_error(const Matrix& m, const Matrix& c_columns, const Matrix& x) {
  if (c_columns.rows() != m.rows() || c_columns.cols() != x.rows() || x.cols() != m.cols())
    throw ParameterError("reconstruction_error: shape mismatch");
  return (m - c_columns * x).norm();
}

double vector_incoherence(const Vector& x) {
  const double nrm2 = x.squaredNorm();
  if (nrm2 == 0.0) throw ParameterError("vector_incoherence: zero vector");
  const double peak = x.cwiseAbs().maxCoeff();
  return static_cast<double>(x.size()) * peak * peak / nrm2;
}

double subspace_incoherence(const OrthoBasis& basis) {
  if (basis.dim() < 1) throw ParameterError("subspace_incoherence: dim 0 basis");
  const Matrix& q = basis.basis();
  const double max_row = q.rowwise().squaredNorm().maxCoeff();
  return static_cast<double>(q.rows()) / static_cast<double>(q.cols()) * max_row;
}

Vector row_leverage_scores(const Matrix& m, Index k, bool* degenerate_spectrum) {
  const Index rmax = std::min(m.rows(), m.cols());
  if (k < 1 || k > rmax) throw ParameterError("row_leverage_scores: k out of range");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  if (degenerate_spectrum) {
    *degenerate_spectrum =
        k < sv.size() && sv(k - 1) - sv(k) <= 1e-12 * std::max(sv(0), 1.0);
  }
  const Matrix vk = svd.matrixV().leftCols(k);
  return vk.rowwise().squaredNorm();
}

namespace {

void enumerate_subsets(Index n, Index k, std::vector<Index>& cur,
                       std::vector<std::vector<Index>>& out, Index start) {
  if (static_cast<Index>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (Index i = start; i <= n - (k - static_cast<Index>(cur.size())); ++i) {
    cur.push_back(i);
    enumerate_subsets(n, k, cur, out, i + 1);
    cur.pop_back();
  }
}

}  // namespace

VolumeDistribution volume_sampling_distribution(const Matrix& m, Index k) {
  if (m.cols() > 12 || k > 4) throw ParameterError("volume_sampling_distribution: combinatorial guard exceeded");
  if (k < 1 || k > m.cols()) throw ParameterError("volume_sampling_distribution: k out of range");

  double factorial = 1.0;
  for (Index i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
  const double norm_factor = factorial * factorial;

  std::vector<std::vector<Index>> subsets;
  std::vector<Index> cur;
  enumerate_subsets(m.cols(), k, cur, subsets, 0);

  VolumeDistribution dist;
  dist.k = k;
  dist.probs.reserve(subsets.size());
  double total = 0.0;
  for (const auto& subset : subsets) {
    Matrix cols(m.rows(), k);
    for (Index t = 0; t < k; ++t) cols.col(t) = m.col(subset[t]);
    const double vol2 = std::max(0.0, (cols.transpose() * cols).determinant()) / norm_factor;
    dist.probs.emplace_back(subset, vol2);
    total += vol2;
  }
  if (!(total > 0.0)) throw DegenerateInputError("volume_sampling_distribution: all volumes zero");
  for (auto& [subset, p] : dist.probs) p /= total;
  return dist;
}

ErrorReport make_error_report(const Matrix& m, const Matrix& c_columns, const Matrix* x, Index k) {
  ErrorReport report;
  report.selection_error = selection_error(m, c_columns);
  if (x) report.reconstruction_error = reconstruction_error(m, c_columns, *x);
  report.oracle_error = best_rank_k_error(m, k);
  if (report.oracle_error > 0.0) {
    report.relative_ratio = report.selection_error / report.oracle_error;
  } else {
    report.relative_ratio = report.selection_error > 0.0
                                ? std::numeric_limits<double>::infinity()
                                : 1.0;
  }
  return report;
}

}  // namespace css
