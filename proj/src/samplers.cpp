#include "css/samplers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace css {

namespace {

// Solves (U_O^T U_O) w = U_O^T x_O, pseudoinverting when the Gram matrix is
// singular within kRankTol. Returns the coefficient vector w.
Vector gram_solve(const Matrix& u_omega, const Vector& x_omega, bool* fallback) {
  const Matrix gram = u_omega.transpose() * u_omega;
  const Vector rhs = u_omega.transpose() * x_omega;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector& ev = eig.eigenvalues();
  const double cutoff = kRankTol * std::max(ev.size() > 0 ? ev(ev.size() - 1) : 0.0, 0.0);
  Vector y = eig.eigenvectors().transpose() * rhs;
  bool degenerate = false;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff && ev(i) > 0.0) {
      y(i) /= ev(i);
    } else {
      y(i) = 0.0;
      degenerate = true;
    }
  }
  if (degenerate && fallback) *fallback = true;
  return eig.eigenvectors() * y;
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Draws `count` indices by cumulative-sum inversion over `weights`. Without
// replacement, a drawn index's score is removed before the next draw.
std::vector<Index> draw_columns(Rng& rng, Vector weights, Index count, bool with_replacement) {
  std::vector<double> scores = to_std(weights);
  double total = 0.0;
  for (double s : scores) total += s;
  std::vector<Index> picks;
  picks.reserve(static_cast<std::size_t>(count));
  for (Index t = 0; t < count; ++t) {
    if (!(total > 0.0)) throw DegenerateInputError("column sampling: distribution has no mass left");
    const auto j = draw_discrete(rng, scores, total);
    picks.push_back(static_cast<Index>(j));
    if (!with_replacement) {
      total -= scores[j];
      scores[j] = 0.0;
    }
  }
  return picks;
}

Matrix materialize_columns(MatrixOracle& oracle, const std::vector<Index>& picks) {
  Matrix cols(oracle.rows(), static_cast<Index>(picks.size()));
  for (std::size_t t = 0; t < picks.size(); ++t) cols.col(static_cast<Index>(t)) = oracle.observe_column(picks[t]);
  return cols;
}

}  // namespace

SamplingWeights estimate_column_norms(MatrixOracle& oracle, double m1) {
  if (m1 < 1.0) throw ParameterError("estimate_column_norms: m1 must be >= 1");
  const Index n1 = oracle.rows();
  const double p = std::min(1.0, m1 / static_cast<double>(n1));
  SamplingWeights weights;
  weights.scores = Vector::Zero(oracle.cols());
  for (Index j = 0; j < oracle.cols(); ++j) {
    const IndexSet omega = oracle.bernoulli_index_set(n1, p);
    if (omega.empty()) continue;  // unbiasedness lost only on this o(1) event
    const Vector x = oracle.observe_column_entries(j, omega);
    weights.scores(j) =
        static_cast<double>(n1) / static_cast<double>(omega.size()) * x.squaredNorm();
  }
  weights.total = weights.scores.sum();
  return weights;
}

NormSamplingResult active_norm_css(MatrixOracle& oracle, Index s, double m1, double m2,
                                   Index k, bool with_replacement) {
  const Index n1 = oracle.rows();
  const Index n2 = oracle.cols();
  if (s < 1) throw ParameterError("active_norm_css: s must be >= 1");
  if (!with_replacement && s > n2)
    throw ParameterError("active_norm_css: s > n2 requires sampling with replacement");
  if (m1 < 1.0 || m2 < 1.0) throw ParameterError("active_norm_css: m1, m2 must be >= 1");

  NormSamplingResult result;
  result.target_rank = k;
  result.weights = estimate_column_norms(oracle, m1);
  if (!(result.weights.total > 0.0))
    throw DegenerateInputError("active_norm_css: all norm estimates are zero");

  result.selection.indices = draw_columns(oracle.rng(), result.weights.scores, s, with_replacement);
  result.selection.columns = materialize_columns(oracle, result.selection.indices);

  // Entrywise sketch: expected budget for column i is m2 n2 c_i / f.
  Matrix mhat = Matrix::Zero(n1, n2);
  for (Index j = 0; j < n2; ++j) {
    const double budget = m2 * static_cast<double>(n2) * result.weights.scores(j) / result.weights.total;
    const double p = std::min(1.0, budget / static_cast<double>(n1));
    const IndexSet omega = oracle.bernoulli_index_set(n1, p);
    if (omega.empty()) continue;
    const Vector x = oracle.observe_column_entries(j, omega);
    const double scale = static_cast<double>(n1) / static_cast<double>(omega.size());
    for (Index r = 0; r < omega.size(); ++r) mhat(omega.indices[r], j) = scale * x(r);
  }

  result.reconstruction.coefficients = pinv_apply(result.selection.columns, mhat);
  result.reconstruction.approx = result.selection.columns * result.reconstruction.coefficients;
  return result;
}

double subsampled_residual_norm(const Vector& x_omega, const OrthoBasis& basis,
                                const IndexSet& omega, double m, bool* degenerate) {
  if (omega.empty()) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  if (x_omega.size() != omega.size())
    throw ParameterError("subsampled_residual_norm: |x_omega| != |omega|");
  const double scale = static_cast<double>(omega.universe) / m;
  if (basis.dim() == 0) return scale * x_omega.squaredNorm();
  if (omega.full()) {
    // Full observation makes the Gram identity exact; project directly.
    return scale * project_residual(x_omega, basis).squaredNorm();
  }
  const Matrix u_omega = basis.rows(omega);
  const Vector w = gram_solve(u_omega, x_omega, degenerate);
  return scale * (x_omega - u_omega * w).squaredNorm();
}

Index IterNormConfig::effective_rounds() const {
  if (rounds > 0) return rounds;
  const double kk = static_cast<double>(k) + 1.0;
  return static_cast<Index>(std::ceil(kk * std::log(kk)));
}

std::vector<Index> IterNormConfig::effective_batches() const {
  if (!batch_sizes.empty()) return batch_sizes;
  const Index t = effective_rounds();
  const double dp = delta_prime > 0.0 ? delta_prime : delta;
  std::vector<Index> sizes(static_cast<std::size_t>(t), 5 * k);
  sizes.back() = static_cast<Index>(std::ceil(10.0 * static_cast<double>(k) / (epsilon * dp)));
  return sizes;
}

namespace {

// Shared state of one iterative-norm-sampling run: the per-column index sets
// and observed values drawn up front, plus the growing span.
struct IterState {
  std::vector<IndexSet> omegas;
  std::vector<Vector> x_omegas;
  OrthoBasis basis;
  bool gram_fallback = false;

  Vector residual_estimates(double m) {
    Vector c(static_cast<Index>(omegas.size()));
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      bool flag = false;
      c(static_cast<Index>(i)) =
          subsampled_residual_norm(x_omegas[i], basis, omegas[i], m, &flag);
      if (flag && !omegas[i].empty()) gram_fallback = true;
    }
    return c;
  }
};

Matrix subsampled_projection(const OrthoBasis& basis, const std::vector<IndexSet>& omegas,
                             const std::vector<Vector>& x_omegas, Index n1, bool* fallback) {
  Matrix mhat = Matrix::Zero(n1, static_cast<Index>(omegas.size()));
  if (basis.dim() == 0) return mhat;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i].empty()) continue;
    const Matrix u_omega = basis.rows(omegas[i]);
    const Vector w = gram_solve(u_omega, x_omegas[i], fallback);
    mhat.col(static_cast<Index>(i)) = basis.basis() * w;
  }
  return mhat;
}

}  // namespace

IterNormResult iterative_norm_css(MatrixOracle& oracle, const IterNormConfig& cfg) {
  const Index n1 = oracle.rows();
  const Index n2 = oracle.cols();
  if (cfg.k < 1 || cfg.k > std::min(n1, n2)) throw ParameterError("iterative_norm_css: k out of range");
  if (cfg.m < 1.0) throw ParameterError("iterative_norm_css: m must be >= 1");

  IterNormResult result;
  IterState state;
  state.basis = OrthoBasis(n1);

  // Entrywise sampling: one Bernoulli(m/n1) set per column, observed once and
  // reused by every round and by the final approximation.
  const double p = std::min(1.0, cfg.m / static_cast<double>(n1));
  state.omegas.reserve(static_cast<std::size_t>(n2));
  state.x_omegas.reserve(static_cast<std::size_t>(n2));
  for (Index j = 0; j < n2; ++j) {
    IndexSet omega = oracle.bernoulli_index_set(n1, p);
    state.x_omegas.push_back(omega.empty() ? Vector(0) : oracle.observe_column_entries(j, omega));
    state.omegas.push_back(std::move(omega));
  }

  std::vector<uint8_t> selected(static_cast<std::size_t>(n2), 0);
  double f_initial = -1.0;

  auto pick_one = [&](Index& out_pick) -> bool {
    Vector c = state.residual_estimates(cfg.m);
    double f = c.sum();
    if (f_initial < 0.0) f_initial = f;
    if (!(f > cfg.degenerate_tol * std::max(f_initial, 0.0)) || !(f > 0.0)) return false;
    out_pick = static_cast<Index>(draw_discrete(oracle.rng(), to_std(c), f));
    return true;
  };

  auto uniform_unselected = [&]() -> Index {
    std::vector<Index> pool;
    for (Index j = 0; j < n2; ++j)
      if (!selected[static_cast<std::size_t>(j)]) pool.push_back(j);
    if (pool.empty()) throw DegenerateInputError("iterative_norm_css: no unselected column left");
    return pool[static_cast<std::size_t>(oracle.rng().below(pool.size()))];
  };

  auto observe_and_grow = [&](Index j, ColumnSelection& sel) {
    const Vector col = oracle.observe_column(j);
    sel.indices.push_back(j);
    sel.columns.conservativeResize(n1, sel.columns.cols() + 1);
    sel.columns.col(sel.columns.cols() - 1) = col;
    selected[static_cast<std::size_t>(j)] = 1;
    state.basis.insert(col);
  };

  result.c.columns.resize(n1, 0);
  for (Index t = 0; t < cfg.k; ++t) {
    Index pick = -1;
    if (pick_one(pick)) {
      observe_and_grow(pick, result.c);
    } else {
      result.degenerate_early_stop = true;
      observe_and_grow(uniform_unselected(), result.c);
    }
  }

  result.s = result.c;
  if (cfg.phase2) {
    const auto batches = cfg.effective_batches();
    for (Index size : batches) {
      Vector c = state.residual_estimates(cfg.m);
      const double f = c.sum();
      if (!(f > cfg.degenerate_tol * std::max(f_initial, 0.0)) || !(f > 0.0)) {
        result.degenerate_early_stop = true;
        break;  // span already captures everything measurable
      }
      // Batch draws are independent (with replacement) at fixed weights.
      const std::vector<double> scores = to_std(c);
      for (Index d = 0; d < size; ++d) {
        const Index j = static_cast<Index>(draw_discrete(oracle.rng(), scores, f));
        observe_and_grow(j, result.s);
      }
    }
  }

  Matrix mhat =
      subsampled_projection(state.basis, state.omegas, state.x_omegas, n1, &state.gram_fallback);
  result.reconstruction.coefficients = pinv_apply(result.s.columns, mhat);
  result.reconstruction.approx = result.s.columns * result.reconstruction.coefficients;
  result.gram_fallback = state.gram_fallback;
  return result;
}

Matrix complete_columns(MatrixOracle& oracle, const OrthoBasis& basis, double m,
                        bool* gram_fallback) {
  if (m < 1.0) throw ParameterError("complete_columns: m must be >= 1");
  if (basis.ambient_dim() != oracle.rows() && basis.dim() > 0)
    throw ParameterError("complete_columns: basis ambient dimension mismatch");
  const Index n1 = oracle.rows();
  const Index n2 = oracle.cols();
  const double p = std::min(1.0, m / static_cast<double>(n1));
  std::vector<IndexSet> omegas;
  std::vector<Vector> x_omegas;
  omegas.reserve(static_cast<std::size_t>(n2));
  for (Index j = 0; j < n2; ++j) {
    IndexSet omega = oracle.bernoulli_index_set(n1, p);
    x_omegas.push_back(omega.empty() ? Vector(0) : oracle.observe_column_entries(j, omega));
    omegas.push_back(std::move(omega));
  }
  return subsampled_projection(basis, omegas, x_omegas, n1, gram_fallback);
}

LeverageScoreResult approx_leverage_css(MatrixOracle& oracle, Index k, Index s, double m,
                                        bool with_replacement) {
  const Index n1 = oracle.rows();
  const Index n2 = oracle.cols();
  if (k < 1 || k > std::min(n1, n2)) throw ParameterError("approx_leverage_css: k out of range");
  if (s < 1) throw ParameterError("approx_leverage_css: s must be >= 1");
  if (!with_replacement && s > n2)
    throw ParameterError("approx_leverage_css: s > n2 requires sampling with replacement");
  if (m < 1.0) throw ParameterError("approx_leverage_css: m must be >= 1");

  const double p = std::min(1.0, m / static_cast<double>(n1));
  const IndexSet row_set = oracle.bernoulli_index_set(n1, p);
  if (row_set.empty()) throw DegenerateInputError("approx_leverage_css: no rows observed");

  Matrix stacked(row_set.size(), n2);
  for (Index r = 0; r < row_set.size(); ++r)
    stacked.row(r) = oracle.observe_row(row_set.indices[r]).transpose();

  Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  Index rank = 0;
  const double cutoff = sv.size() > 0 ? kRankTol * sv(0) : 0.0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  if (rank == 0) throw DegenerateInputError("approx_leverage_css: observed rows are all zero");

  LeverageScoreResult result;
  result.k_effective = std::min(k, rank);
  result.k_truncated = result.k_effective < k;
  const Matrix vk = svd.matrixV().leftCols(result.k_effective);
  result.scores = vk.rowwise().squaredNorm();

  result.selection.indices =
      draw_columns(oracle.rng(), result.scores, s, with_replacement);
  result.selection.columns = materialize_columns(oracle, result.selection.indices);
  return result;
}

}  // namespace css
