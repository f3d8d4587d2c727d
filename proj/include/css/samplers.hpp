#pragma once

#include <cstdint>
#include <vector>

#include "css/dense_core.hpp"
#include "css/oracle.hpp"

namespace css {

// Ordered selected column indices (duplicates possible under
// with-replacement modes) plus the materialized columns.
struct ColumnSelection {
  std::vector<Index> indices;
  Matrix columns;  // n1 x indices.size(); columns.col(t) is the matrix column at indices[t]

  Index size() const { return static_cast<Index>(indices.size()); }
};

// Unnormalized per-column scores defining a discrete sampling distribution.
struct SamplingWeights {
  Vector scores;      // nonnegative
  double total = 0.0; // sum of scores
};

struct Reconstruction {
  Matrix coefficients;  // s x n2
  Matrix approx;        // n1 x n2, equals columns * coefficients
};

struct NormSamplingResult {
  ColumnSelection selection;
  Reconstruction reconstruction;
  SamplingWeights weights;  // the norm estimates the run sampled from
  Index target_rank = 0;    // analysis rank carried through for reporting
};

// Configuration of iterative norm sampling. Phase 1 picks exactly k columns
// one at a time; phase 2 runs `rounds` batched rounds with sizes
// batch_sizes[t]. Defaults follow the prescription rounds =
// ceil((k+1) ln(k+1)), batches 5k, ..., 5k, ceil(10k/(epsilon*delta')); both
// are overridable since desk-scale runs need smaller constants.
struct IterNormConfig {
  Index k = 1;
  double epsilon = 0.5;
  double delta = 0.1;
  double delta_prime = -1.0;  // < 0: use delta; separate knob for the final batch size
  double m = 1.0;             // expected samples per column
  bool phase2 = false;
  Index rounds = 0;                // 0: default
  std::vector<Index> batch_sizes;  // empty: default
  double degenerate_tol = 1e-12;   // early-stop when f^(t) <= tol * f^(1)

  Index effective_rounds() const;
  std::vector<Index> effective_batches() const;
};

struct IterNormResult {
  ColumnSelection c;  // the k phase-1 columns
  ColumnSelection s;  // phase-1 plus phase-2 columns (equals c when phase2 off)
  Reconstruction reconstruction;
  bool degenerate_early_stop = false;  // residual hit numerical zero; rest drawn uniformly
  bool gram_fallback = false;          // some subsampled Gram matrix needed a pseudoinverse
};

struct LeverageScoreResult {
  ColumnSelection selection;
  Vector scores;          // unnormalized estimated leverage scores over columns
  Index k_effective = 0;  // k after truncation to the observed row-space rank
  bool k_truncated = false;
};

// Per-column squared-norm estimates from Bernoulli(m1/n1) index sets:
// c_i = (n1/|Omega_i|) ||x_{i,Omega_i}||^2, and 0 when Omega_i is empty.
// Consumes one index set per column i = 0..n2-1 from the oracle's stream.
SamplingWeights estimate_column_norms(MatrixOracle& oracle, double m1);

// Active norm sampling: norm estimation, s column draws proportional to the
// estimates, then a rescaled entrywise sketch with per-column budget
// m_{2,i} = m2 n2 c_i / f, and X = C^+ Mhat. RNG order: estimation sets,
// selection draws, approximation sets. s may exceed n2 only with replacement.
NormSamplingResult active_norm_css(MatrixOracle& oracle, Index s, double m1, double m2,
                                   Index k = 0, bool with_replacement = false);

// Rescaled squared norm of the subsampled residual
// (n1/m) ||x_Omega - U_Omega (U_Omega^T U_Omega)^-1 U_Omega^T x_Omega||^2.
// x_omega holds the |Omega| observed values in index order. Falls back to a
// pseudoinverse when the Gram matrix is singular within tolerance; empty
// Omega yields 0 with *degenerate set.
double subsampled_residual_norm(const Vector& x_omega, const OrthoBasis& basis,
                                const IndexSet& omega, double m, bool* degenerate = nullptr);

// Iterative norm sampling. Draws one Bernoulli(m/n1) set per column up
// front, then repeatedly samples columns proportional to estimated residual
// norms, observing each pick in full and growing the span. With cfg.phase2,
// batched rounds follow, and the approximation applies the subsampled
// projector U (U_Omega^T U_Omega)^-1 U_Omega^T x_Omega to every column.
IterNormResult iterative_norm_css(MatrixOracle& oracle, const IterNormConfig& cfg);

// Standalone column completion onto span(basis): fresh Bernoulli(m/n1) sets,
// one per column, then the subsampled projector per column.
Matrix complete_columns(MatrixOracle& oracle, const OrthoBasis& basis, double m,
                        bool* gram_fallback = nullptr);

// Approximate leverage score sampling: observe each row independently with
// probability m/n1, estimate the unnormalized row-space leverage scores from
// the top-k right singular vectors of the stacked rows, then draw s columns
// with Pr = l_j / k.
LeverageScoreResult approx_leverage_css(MatrixOracle& oracle, Index k, Index s, double m,
                                        bool with_replacement = false);

}  // namespace css
