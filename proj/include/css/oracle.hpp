#pragma once

#include <cstdint>
#include <vector>

#include "css/dense_core.hpp"
#include "css/rng.hpp"

namespace css {

// Mask of observed entries, column-major to match Matrix.
struct ObservationMask {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint8_t> observed;

  ObservationMask() = default;
  ObservationMask(Index r, Index c, bool value = false)
      : rows(r), cols(c), observed(static_cast<std::size_t>(r * c), value ? 1 : 0) {}

  bool at(Index i, Index j) const { return observed[static_cast<std::size_t>(j * rows + i)] != 0; }
  void set(Index i, Index j, bool v = true) {
    observed[static_cast<std::size_t>(j * rows + i)] = v ? 1 : 0;
  }
  std::uint64_t count() const;

  static ObservationMask bernoulli(Index rows, Index cols, double p, Rng& rng);
};

// Gatekeeper to the hidden matrix M. Every observation goes through a query
// that bumps a counter; re-queried entries are re-charged (draw counting, as
// in the expected-sample-complexity accounting), with a separate
// distinct-entries gauge kept for reporting. Single-owner: parallel trials
// use independent oracles with distinct seeds.
class MatrixOracle {
 public:
  MatrixOracle(Matrix hidden, std::uint64_t seed);

  Index rows() const { return hidden_.rows(); }
  Index cols() const { return hidden_.cols(); }

  double observe_entry(Index i, Index j);
  Vector observe_column(Index j);
  Vector observe_row(Index i);

  // Subsampled column: the entries of column j at omega (compact, |omega|
  // values in index order). Charges |omega| entry queries.
  Vector observe_column_entries(Index j, const IndexSet& omega);

  // Each index included independently with probability p from the oracle's
  // seeded stream; consumes exactly `universe` uniforms.
  IndexSet bernoulli_index_set(Index universe, double p);

  // Fixed-size without-replacement alternative (experiment flag); the
  // algorithm statements themselves use Bernoulli sets.
  IndexSet fixed_size_index_set(Index universe, Index count);

  // W o M with unobserved entries zero; charges one entry query per observed
  // position.
  Matrix masked_view(const ObservationMask& mask);

  std::uint64_t entry_queries() const { return entry_queries_; }
  std::uint64_t column_queries() const { return column_queries_; }
  std::uint64_t row_queries() const { return row_queries_; }
  std::uint64_t total_entries_observed() const {
    return entry_queries_ + column_queries_ * static_cast<std::uint64_t>(rows()) +
           row_queries_ * static_cast<std::uint64_t>(cols());
  }
  std::uint64_t distinct_entries() const { return distinct_count_; }

  Rng& rng() { return rng_; }

  // Evaluation-only access for error reporting; does not touch counters.
  const Matrix& ground_truth() const { return hidden_; }

 private:
  void mark(Index i, Index j);

  Matrix hidden_;
  std::uint64_t entry_queries_ = 0;
  std::uint64_t column_queries_ = 0;
  std::uint64_t row_queries_ = 0;
  std::vector<std::uint8_t> seen_;
  std::uint64_t distinct_count_ = 0;
  Rng rng_;
};

}  // namespace css
