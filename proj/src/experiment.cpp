#include "css/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "css/baselines.hpp"
#include "css/metrics.hpp"
#include "css/oracle.hpp"
#include "css/samplers.hpp"

namespace css {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, long line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("expected boolean, got '" + v + "'", line);
}

double parse_double(const std::string& v, long line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("expected number, got '" + v + "'", line);
  }
}

Index parse_index(const std::string& v, long line) {
  const double d = parse_double(v, line);
  if (d != std::floor(d)) throw ParseError("expected integer, got '" + v + "'", line);
  return static_cast<Index>(d);
}

std::vector<double> parse_double_list(const std::string& v, long line) {
  std::string spaced = v;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream ls(spaced);
  std::vector<double> out;
  std::string tok;
  while (ls >> tok) out.push_back(parse_double(tok, line));
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& /*origin*/) {
  ExperimentConfig cfg;
  std::string section;       // "", "dataset", or "algorithm"
  AlgorithmSpec* algo = nullptr;
  std::string line;
  long lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", lineno);
      const std::string header = trim(line.substr(1, line.size() - 2));
      if (header == "dataset") {
        section = "dataset";
        algo = nullptr;
      } else if (header.rfind("algorithm", 0) == 0) {
        const std::string name = trim(header.substr(9));
        if (std::find(kAlgorithmNames.begin(), kAlgorithmNames.end(), name) == kAlgorithmNames.end())
          throw ParseError("unknown algorithm '" + name + "'", lineno);
        cfg.algorithms.push_back(AlgorithmSpec{});
        cfg.algorithms.back().name = name;
        algo = &cfg.algorithms.back();
        section = "algorithm";
      } else {
        throw ParseError("unknown section [" + header + "]", lineno);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError("empty key or value", lineno);

    if (section.empty()) {
      if (key == "out")
        cfg.out_path = value;
      else if (key == "trials")
        cfg.trials = parse_index(value, lineno);
      else if (key == "seed")
        cfg.seed_base = static_cast<std::uint64_t>(parse_double(value, lineno));
      else if (key == "jobs")
        cfg.jobs = parse_index(value, lineno);
      else if (key == "alphas" || key == "alpha")
        cfg.missing_rates = parse_double_list(value, lineno);
      else
        throw ParseError("unknown key '" + key + "'", lineno);
    } else if (section == "dataset") {
      auto& d = cfg.dataset;
      if (key == "kind")
        d.kind = value;
      else if (key == "path")
        d.path = value;
      else if (key == "n1")
        d.synthetic.n1 = parse_index(value, lineno);
      else if (key == "n2")
        d.synthetic.n2 = parse_index(value, lineno);
      else if (key == "rank" || key == "k")
        d.synthetic.k = parse_index(value, lineno);
      else if (key == "sigma")
        d.synthetic.sigma = parse_double(value, lineno);
      else if (key == "repeated")
        d.synthetic.repeated = parse_index(value, lineno);
      else if (key == "scale")
        d.synthetic.scale = parse_double(value, lineno);
      else if (key == "seed")
        d.synthetic.seed = static_cast<std::uint64_t>(parse_double(value, lineno));
      else
        throw ParseError("unknown dataset key '" + key + "'", lineno);
    } else {
      if (key == "s")
        algo->s = parse_index(value, lineno);
      else if (key == "k")
        algo->k = parse_index(value, lineno);
      else if (key == "m")
        algo->m = value == "auto" ? -1.0 : parse_double(value, lineno);
      else if (key == "epsilon")
        algo->epsilon = parse_double(value, lineno);
      else if (key == "delta")
        algo->delta = parse_double(value, lineno);
      else if (key == "with_replacement")
        algo->with_replacement = parse_bool(value, lineno);
      else if (key == "phase2")
        algo->phase2 = parse_bool(value, lineno);
      else if (key == "lambda")
        algo->lambda = value == "auto" ? -1.0 : parse_double(value, lineno);
      else if (key == "lambda_grid")
        algo->lambda_grid = parse_index(value, lineno);
      else
        throw ParseError("unknown algorithm key '" + key + "'", lineno);
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  return parse_experiment_config(in, path);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ParameterError("config: trials must be >= 1");
  if (cfg.jobs < 1) throw ParameterError("config: jobs must be >= 1");
  if (cfg.missing_rates.empty()) throw ParameterError("config: at least one alpha required");
  for (double a : cfg.missing_rates)
    if (!(a > 0.0 && a <= 1.0)) throw ParameterError("config: alpha must be in (0, 1]");
  if (cfg.algorithms.empty()) throw ParameterError("config: at least one algorithm required");
  for (const auto& algo : cfg.algorithms) {
    if (std::find(kAlgorithmNames.begin(), kAlgorithmNames.end(), algo.name) == kAlgorithmNames.end())
      throw ParameterError("config: unknown algorithm '" + algo.name + "'");
    const bool needs_s = algo.name != "iter_norm";
    if (needs_s && algo.s < 1)
      throw ParameterError("config: algorithm '" + algo.name + "' needs s >= 1");
    if (algo.name == "iter_norm" && algo.k < 1)
      throw ParameterError("config: iter_norm needs k >= 1");
  }
  const auto& kind = cfg.dataset.kind;
  if (kind != "synthetic" && kind != "dense" && kind != "sign" && kind != "pgm")
    throw ParameterError("config: unknown dataset kind '" + kind + "'");
  if (kind != "synthetic" && cfg.dataset.path.empty())
    throw ParameterError("config: dataset kind '" + kind + "' needs a path");
}

Matrix load_dataset(const DatasetSpec& spec) {
  Matrix m;
  if (spec.kind == "synthetic") {
    m = spec.synthetic.repeated > 0 ? gen_coherent(spec.synthetic)
                                    : gen_lowrank_noise(spec.synthetic);
    return m;  // generators already normalize
  }
  if (spec.kind == "dense")
    m = load_dense_text(spec.path);
  else if (spec.kind == "sign")
    m = load_sign_matrix(spec.path);
  else if (spec.kind == "pgm")
    m = load_grayscale(spec.path);
  else
    throw ParameterError("load_dataset: unknown kind '" + spec.kind + "'");
  const double nrm = m.norm();
  if (nrm == 0.0) throw DegenerateInputError("load_dataset: zero matrix");
  return m / nrm;
}

namespace {

double resolve_m(const AlgorithmSpec& algo, double alpha, Index n1) {
  const double m = algo.m > 0.0 ? algo.m : alpha * static_cast<double>(n1);
  return std::max(1.0, m);
}

Matrix true_columns(const Matrix& m, const std::vector<Index>& indices) {
  Matrix cols(m.rows(), static_cast<Index>(indices.size()));
  for (std::size_t t = 0; t < indices.size(); ++t) cols.col(static_cast<Index>(t)) = m.col(indices[t]);
  return cols;
}

struct TrialOutcome {
  std::vector<Index> indices;
  double reconstruction = kNaN;
  std::uint64_t entries = 0;
};

TrialOutcome run_trial(const Matrix& m, const AlgorithmSpec& algo, double alpha,
                       std::uint64_t seed) {
  const Index n1 = m.rows();
  MatrixOracle oracle(m, seed);
  TrialOutcome out;

  if (algo.name == "norm") {
    const double budget = resolve_m(algo, alpha, n1);
    auto result = active_norm_css(oracle, algo.s, budget, budget, algo.rank(), algo.with_replacement);
    out.indices = result.selection.indices;
    out.reconstruction =
        reconstruction_error(m, true_columns(m, out.indices), result.reconstruction.coefficients);
  } else if (algo.name == "iter_norm") {
    IterNormConfig cfg;
    cfg.k = algo.k;
    cfg.epsilon = algo.epsilon;
    cfg.delta = algo.delta;
    cfg.m = resolve_m(algo, alpha, n1);
    cfg.phase2 = algo.phase2;
    auto result = iterative_norm_css(oracle, cfg);
    out.indices = result.s.indices;
    out.reconstruction =
        reconstruction_error(m, true_columns(m, out.indices), result.reconstruction.coefficients);
  } else if (algo.name == "lev_score") {
    auto result = approx_leverage_css(oracle, algo.rank(), algo.s, resolve_m(algo, alpha, n1),
                                      algo.with_replacement);
    out.indices = result.selection.indices;
  } else if (algo.name == "block_omp") {
    const auto mask = ObservationMask::bernoulli(m.rows(), m.cols(), alpha, oracle.rng());
    const Matrix masked = oracle.masked_view(mask);
    out.indices = block_omp_css(masked, mask, algo.s).indices;
  } else if (algo.name == "group_lasso") {
    const auto mask = ObservationMask::bernoulli(m.rows(), m.cols(), alpha, oracle.rng());
    const Matrix masked = oracle.masked_view(mask);
    GroupLassoConfig cfg;
    cfg.target_s = algo.s;
    cfg.max_iters = 5000;
    cfg.tol = 1e-10;
    if (algo.lambda >= 0.0) {
      cfg.lambda = algo.lambda;
      out.indices = group_lasso_css(masked, mask, cfg).selection.indices;
    } else {
      auto path = group_lasso_path(masked, mask, algo.s, algo.lambda_grid, 1e-3, cfg);
      out.indices = path.back().selection.indices;
    }
    if (out.indices.empty()) throw DegenerateInputError("group_lasso selected no columns");
  } else if (algo.name == "uniform") {
    // Uniform without replacement, chosen columns observed in full.
    const IndexSet picks = oracle.fixed_size_index_set(m.cols(), algo.s);
    for (Index j : picks.indices) {
      oracle.observe_column(j);
      out.indices.push_back(j);
    }
  } else {
    throw ParameterError("unknown algorithm '" + algo.name + "'");
  }

  out.entries = oracle.total_entries_observed();
  return out;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ExperimentConfig with_uniform_baseline(ExperimentConfig cfg) {
  for (const auto& algo : cfg.algorithms)
    if (algo.name == "uniform") return cfg;
  AlgorithmSpec uniform;
  uniform.name = "uniform";
  // Inherit the column budget from the first arm that has one.
  for (const auto& algo : cfg.algorithms) {
    if (algo.s > 0) {
      uniform.s = algo.s;
      uniform.k = algo.rank();
      break;
    }
    if (algo.name == "iter_norm") {
      uniform.s = algo.k;
      uniform.k = algo.k;
      break;
    }
  }
  if (uniform.s < 1) throw ParameterError("with_uniform_baseline: no column budget to inherit");
  cfg.algorithms.push_back(uniform);
  return cfg;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const Matrix m = load_dataset(cfg.dataset);

  // Oracle errors ||M - M_k||_F, one SVD per distinct rank.
  std::map<Index, double> oracle_errors;
  for (const auto& algo : cfg.algorithms) oracle_errors[algo.rank()] = 0.0;
  for (auto& [k, err] : oracle_errors) err = best_rank_k_error(m, k);

  struct Task {
    std::size_t algo;
    std::size_t alpha;
    Index trial;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
    for (std::size_t x = 0; x < cfg.missing_rates.size(); ++x)
      for (Index t = 0; t < cfg.trials; ++t) tasks.push_back({a, x, t});

  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      const AlgorithmSpec& algo = cfg.algorithms[task.algo];
      const double alpha = cfg.missing_rates[task.alpha];
      ResultRow& row = rows[i];
      row.algorithm = algo.name;
      row.alpha = alpha;
      row.s = algo.name == "iter_norm" && algo.s < 1 ? algo.k : algo.s;
      row.k = algo.rank();
      row.seed = derive_seed(cfg.seed_base, task.algo, task.alpha,
                             static_cast<std::uint64_t>(task.trial));
      row.oracle_error = oracle_errors[algo.rank()];
      const auto start = std::chrono::steady_clock::now();
      try {
        TrialOutcome outcome = run_trial(m, algo, alpha, row.seed);
        row.selection_error = selection_error(m, true_columns(m, outcome.indices));
        row.reconstruction_error = outcome.reconstruction;
        row.entries_observed = outcome.entries;
        row.status = "ok";
      } catch (const std::exception&) {
        row.selection_error = std::numeric_limits<double>::infinity();
        row.reconstruction_error = kNaN;
        row.entries_observed = 0;
        row.status = "failed";
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
  };

  const Index thread_count = std::min<Index>(cfg.jobs, static_cast<Index>(tasks.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (Index t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<std::pair<std::string, double>> groups;
  for (const auto& row : rows) {
    const std::pair<std::string, double> key{row.algorithm, row.alpha};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
  }
  std::vector<SummaryRow> summaries;
  for (const auto& [name, alpha] : groups) {
    SummaryRow summary;
    summary.algorithm = name;
    summary.alpha = alpha;
    std::vector<double> sel, rec, entries, times;
    for (const auto& row : rows) {
      if (row.algorithm != name || row.alpha != alpha) continue;
      ++summary.trials;
      summary.s = row.s;
      summary.k = row.k;
      summary.oracle_error = row.oracle_error;
      times.push_back(row.wall_ms);
      if (row.status != "ok") continue;
      sel.push_back(row.selection_error);
      if (!std::isnan(row.reconstruction_error)) rec.push_back(row.reconstruction_error);
      entries.push_back(static_cast<double>(row.entries_observed));
    }
    summary.median_selection = median(sel);
    summary.median_reconstruction = median(rec);
    summary.mean_entries =
        entries.empty() ? 0.0
                        : std::accumulate(entries.begin(), entries.end(), 0.0) /
                              static_cast<double>(entries.size());
    summary.median_wall_ms = median(times);
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const auto& row : rows) {
    out << row.algorithm << "," << fmt_double(row.alpha) << "," << row.s << "," << row.k << ","
        << row.seed << "," << fmt_double(row.selection_error) << ","
        << fmt_double(row.reconstruction_error) << "," << fmt_double(row.oracle_error) << ","
        << row.entries_observed << "," << row.status << "\n";
  }

  const auto summaries = summarize(rows);
  out << "# summary\n";
  for (const auto& s : summaries) {
    out << s.algorithm << "," << fmt_double(s.alpha) << "," << s.s << "," << s.k << ","
        << s.trials << "," << fmt_double(s.median_selection) << ","
        << fmt_double(s.median_reconstruction) << "," << fmt_double(s.oracle_error) << ","
        << fmt_double(s.mean_entries) << ",summary\n";
  }
  // Wall-clock medians as comments; golden comparisons skip these lines.
  for (const auto& s : summaries)
    out << "# timing," << s.algorithm << "," << fmt_double(s.alpha) << ","
        << fmt_double(s.median_wall_ms) << "\n";
}

void write_csv_file(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write CSV file: " + path);
  write_csv(rows, out);
}

}  // namespace css
