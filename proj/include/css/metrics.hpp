#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "css/dense_core.hpp"

namespace css {

struct ErrorReport {
  double selection_error = 0.0;                  // ||M - C C^+ M||_F
  std::optional<double> reconstruction_error;    // ||M - C X||_F when X known
  double oracle_error = 0.0;                     // ||M - M_k||_F
  double relative_ratio = 0.0;                   // selection/oracle, inf sentinel
};

// Exact distribution over all k-subsets of columns, Pr[C] proportional to the
// squared volume of the simplex spanned by the subset's columns.
struct VolumeDistribution {
  Index k = 0;
  std::vector<std::pair<std::vector<Index>, double>> probs;  // subsets in lexicographic order

  double prob_of(const std::vector<Index>& subset) const;
};

double selection_error(const Matrix& m, const Matrix& c_columns);
double reconstruction_error(const Matrix& m, const Matrix& c_columns, const Matrix& x);

// mu(x) = n ||x||_inf^2 / ||x||_2^2, in [1, n].
double vector_incoherence(const Vector& x);

// mu(U) = (n/d) max_i ||U^T e_i||^2, in [1, n/d]. For bases with dim > the
// nominal rank the same formula applies with k replaced by dim.
double subspace_incoherence(const OrthoBasis& basis);

// Unnormalized row-space leverage scores over columns: l_j = ||V_k^T e_j||^2,
// summing to k. Sets *degenerate_spectrum when sigma_k ~= sigma_{k+1} (the
// top-k subspace is not unique).
Vector row_leverage_scores(const Matrix& m, Index k, bool* degenerate_spectrum = nullptr);

// Brute-force oracle; guarded to n2 <= 12, k <= 4. vol(Delta(C))^2 is the Gram
// determinant of the subset's columns divided by (k!)^2.
VolumeDistribution volume_sampling_distribution(const Matrix& m, Index k);

ErrorReport make_error_report(const Matrix& m, const Matrix& c_columns, const Matrix* x, Index k);

}  // namespace css
