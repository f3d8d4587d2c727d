#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "css/datagen.hpp"

namespace css {

inline const std::vector<std::string> kAlgorithmNames = {
    "norm", "iter_norm", "lev_score", "block_omp", "group_lasso", "uniform"};

struct AlgorithmSpec {
  std::string name;
  Index s = 0;  // selected columns (iter_norm phase-1 uses k instead)
  Index k = 0;  // analysis rank; defaults to s when left 0
  double m = -1.0;          // expected samples per column; < 0 = alpha * n1
  double epsilon = 0.5;
  double delta = 0.1;
  bool with_replacement = false;
  bool phase2 = false;
  double lambda = -1.0;     // group_lasso; < 0 = geometric grid
  Index lambda_grid = 20;

  Index rank() const { return k > 0 ? k : s; }
};

struct DatasetSpec {
  std::string kind = "synthetic";  // synthetic | dense | sign | pgm
  std::string path;                // for file kinds
  SyntheticSpec synthetic;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<double> missing_rates;  // alpha values in (0, 1]
  Index trials = 8;
  std::uint64_t seed_base = 0;
  std::string out_path = "results.csv";
  Index jobs = 1;
};

struct ResultRow {
  std::string algorithm;
  double alpha = 0.0;
  Index s = 0;
  Index k = 0;
  std::uint64_t seed = 0;
  double selection_error = 0.0;
  double reconstruction_error = 0.0;  // NaN when the algorithm returns no X
  double oracle_error = 0.0;
  std::uint64_t entries_observed = 0;
  double wall_ms = 0.0;
  std::string status = "ok";
};

// Key-value config with [dataset] and repeated [algorithm <name>] sections.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(std::istream& in, const std::string& origin);
void validate_config(const ExperimentConfig& cfg);

// Materializes the configured dataset, Frobenius-normalized.
Matrix load_dataset(const DatasetSpec& spec);

// Runs every (algorithm, alpha, trial) cell; rows come back in deterministic
// (algorithm, alpha, trial) order regardless of the jobs count. Failed trials
// get status "failed" and the sweep continues.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Adds the uniform-column-sampling arm to the sweep if not already present.
ExperimentConfig with_uniform_baseline(ExperimentConfig cfg);

struct SummaryRow {
  std::string algorithm;
  double alpha = 0.0;
  Index s = 0;
  Index k = 0;
  std::size_t trials = 0;
  double median_selection = 0.0;
  double median_reconstruction = 0.0;  // NaN when absent
  double oracle_error = 0.0;
  double mean_entries = 0.0;
  double median_wall_ms = 0.0;
};

// Per-(algorithm, alpha) medians over the ok trials, first-seen order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

// Data rows per the fixed header, a "# summary" section of per-(algorithm,
// alpha) medians, then "# timing" comment lines (excluded from golden
// comparisons).
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv_file(const std::vector<ResultRow>& rows, const std::string& path);

double median(std::vector<double> values);

inline const char* kCsvHeader =
    "algorithm,alpha,s,k,seed,selection_error,reconstruction_error,oracle_error,"
    "entries_observed,status";

}  // namespace css
