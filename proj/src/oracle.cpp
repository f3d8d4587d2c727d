#include "css/oracle.hpp"

#include <cmath>
#include <numeric>

namespace css {

std::uint64_t ObservationMask::count() const {
  std::uint64_t n = 0;
  for (auto v : observed) n += v;
  return n;
}

ObservationMask ObservationMask::bernoulli(Index rows, Index cols, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw ParameterError("mask probability outside [0, 1]");
  ObservationMask mask(rows, cols);
  for (auto& v : mask.observed) v = rng.uniform() < p ? 1 : 0;
  return mask;
}

MatrixOracle::MatrixOracle(Matrix hidden, std::uint64_t seed)
    : hidden_(std::move(hidden)),
      seen_(static_cast<std::size_t>(hidden_.size()), 0),
      rng_(seed) {
  if (hidden_.rows() < 1 || hidden_.cols() < 1) throw ParameterError("oracle: empty matrix");
  if (!hidden_.allFinite()) throw ParameterError("oracle: matrix has non-finite entries");
}

void MatrixOracle::mark(Index i, Index j) {
  auto& cell = seen_[static_cast<std::size_t>(j * rows() + i)];
  if (!cell) {
    cell = 1;
    ++distinct_count_;
  }
}

double MatrixOracle::observe_entry(Index i, Index j) {
  if (i < 0 || i >= rows() || j < 0 || j >= cols()) throw ParameterError("observe_entry: index out of range");
  ++entry_queries_;
  mark(i, j);
  return hidden_(i, j);
}

Vector MatrixOracle::observe_column(Index j) {
  if (j < 0 || j >= cols()) throw ParameterError("observe_column: index out of range");
  ++column_queries_;
  for (Index i = 0; i < rows(); ++i) mark(i, j);
  return hidden_.col(j);
}

Vector MatrixOracle::observe_row(Index i) {
  if (i < 0 || i >= rows()) throw ParameterError("observe_row: index out of range");
  ++row_queries_;
  for (Index j = 0; j < cols(); ++j) mark(i, j);
  return hidden_.row(i).transpose();
}

Vector MatrixOracle::observe_column_entries(Index j, const IndexSet& omega) {
  if (j < 0 || j >= cols()) throw ParameterError("observe_column_entries: column out of range");
  if (omega.universe != rows()) throw ParameterError("observe_column_entries: universe mismatch");
  Vector out(omega.size());
  for (Index r = 0; r < omega.size(); ++r) {
    const Index i = omega.indices[r];
    ++entry_queries_;
    mark(i, j);
    out(r) = hidden_(i, j);
  }
  return out;
}

IndexSet MatrixOracle::bernoulli_index_set(Index universe, double p) {
  if (p < 0.0 || p > 1.0) throw ParameterError("bernoulli_index_set: p outside [0, 1]");
  if (universe < 0) throw ParameterError("bernoulli_index_set: negative universe");
  IndexSet set;
  set.universe = universe;
  for (Index i = 0; i < universe; ++i)
    if (rng_.uniform() < p) set.indices.push_back(i);
  return set;
}

IndexSet MatrixOracle::fixed_size_index_set(Index universe, Index count) {
  if (count < 0 || count > universe) throw ParameterError("fixed_size_index_set: count out of range");
  std::vector<Index> pool(static_cast<std::size_t>(universe));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    const auto j = i + static_cast<Index>(rng_.below(static_cast<std::uint64_t>(universe - i)));
    std::swap(pool[i], pool[j]);
  }
  IndexSet set;
  set.universe = universe;
  set.indices.assign(pool.begin(), pool.begin() + count);
  std::sort(set.indices.begin(), set.indices.end());
  return set;
}

Matrix MatrixOracle::masked_view(const ObservationMask& mask) {
  if (mask.rows != rows() || mask.cols != cols()) throw ParameterError("masked_view: dimension mismatch");
  Matrix out = Matrix::Zero(rows(), cols());
  for (Index j = 0; j < cols(); ++j)
    for (Index i = 0; i < rows(); ++i)
      if (mask.at(i, j)) out(i, j) = observe_entry(i, j);
  return out;
}

}  // namespace css
