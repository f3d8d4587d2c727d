// css: column subset selection experiment harness.
//
//   css run <config> [--jobs N] [--seed S] [--out PATH] [--alpha A...]
//           [--trials N] [--with-uniform]
//   css gen <spec-file> [--seed S] --out PATH
//   css eval --matrix PATH --columns i,j,k [--k K]
//
// Exit codes: 0 success, 2 invalid configuration, 1 runtime failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "css/dense_core.hpp"
#include "css/datagen.hpp"
#include "css/experiment.hpp"
#include "css/metrics.hpp"

namespace {

std::vector<css::Index> parse_columns(const std::string& spec) {
  std::string spaced = spec;
  for (auto& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream ls(spaced);
  std::vector<css::Index> out;
  long v;
  while (ls >> v) {
    if (v < 0) throw css::ParameterError("column indices are 0-based and must be >= 0");
    out.push_back(static_cast<css::Index>(v));
  }
  if (out.empty()) throw css::ParameterError("--columns must name at least one column");
  return out;
}

int cmd_run(const std::string& config_path, int jobs, long long seed, const std::string& out,
            const std::vector<double>& alphas, int trials, bool with_uniform) {
  css::ExperimentConfig cfg = css::load_experiment_config(config_path);
  if (jobs > 0) cfg.jobs = jobs;
  if (seed >= 0) cfg.seed_base = static_cast<std::uint64_t>(seed);
  if (!out.empty()) cfg.out_path = out;
  if (!alphas.empty()) cfg.missing_rates = alphas;
  if (trials > 0) cfg.trials = trials;
  if (with_uniform) cfg = css::with_uniform_baseline(cfg);
  css::validate_config(cfg);

  const auto rows = css::run_experiment(cfg);
  css::write_csv_file(rows, cfg.out_path);

  std::printf("%-12s %6s %4s %4s %14s %14s %12s %12s\n", "algorithm", "alpha", "s", "k",
              "med_sel_err", "med_rec_err", "oracle_err", "entries");
  for (const auto& s : css::summarize(rows)) {
    char rec[32] = "-";
    if (!std::isnan(s.median_reconstruction))
      std::snprintf(rec, sizeof(rec), "%.6g", s.median_reconstruction);
    std::printf("%-12s %6.3g %4lld %4lld %14.6g %14s %12.6g %12.6g\n", s.algorithm.c_str(),
                s.alpha, static_cast<long long>(s.s), static_cast<long long>(s.k),
                s.median_selection, rec, s.oracle_error, s.mean_entries);
  }

  std::size_t failed = 0;
  for (const auto& row : rows)
    if (row.status != "ok") ++failed;
  std::cout << "wrote " << rows.size() << " trial rows to " << cfg.out_path;
  if (failed) std::cout << " (" << failed << " failed)";
  std::cout << "\n";
  return 0;
}

int cmd_gen(const std::string& spec_path, long long seed, const std::string& out) {
  std::ifstream in(spec_path);
  if (!in) throw css::ParseError("cannot open spec file: " + spec_path);
  // A gen spec is the [dataset] section's keys, with or without the header.
  std::stringstream wrapped;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.find("[dataset]") == std::string::npos) wrapped << "[dataset]\n";
  wrapped << content;
  css::ExperimentConfig cfg = css::parse_experiment_config(wrapped, spec_path);
  if (seed >= 0) cfg.dataset.synthetic.seed = static_cast<std::uint64_t>(seed);
  const css::Matrix m = css::load_dataset(cfg.dataset);
  css::save_dense_text(m, out);
  std::cout << "wrote " << m.rows() << "x" << m.cols() << " matrix to " << out << "\n";
  return 0;
}

int cmd_eval(const std::string& matrix_path, const std::string& columns, css::Index k) {
  const css::Matrix m = css::load_dense_text(matrix_path);
  const auto indices = parse_columns(columns);
  css::Matrix cols(m.rows(), static_cast<css::Index>(indices.size()));
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= m.cols()) throw css::ParameterError("column index out of range");
    cols.col(static_cast<css::Index>(t)) = m.col(indices[t]);
  }
  if (k < 1) k = static_cast<css::Index>(indices.size());
  k = std::min(k, std::min(m.rows(), m.cols()));

  const css::Matrix x = css::pinv_apply(cols, m);
  const auto report = css::make_error_report(m, cols, &x, k);
  std::printf("selection_error      %.12g\n", report.selection_error);
  std::printf("reconstruction_error %.12g\n", *report.reconstruction_error);
  std::printf("oracle_error         %.12g  (k = %lld)\n", report.oracle_error,
              static_cast<long long>(k));
  std::printf("relative_ratio       %.12g\n", report.relative_ratio);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"column subset selection for partially observed matrices"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute an experiment sweep and write CSV");
  std::string run_config;
  int run_jobs = 0;
  long long run_seed = -1;
  std::string run_out;
  std::vector<double> run_alphas;
  int run_trials = 0;
  bool run_uniform = false;
  run->add_option("config", run_config, "experiment config file")->required();
  run->add_option("--jobs", run_jobs, "concurrent trials");
  run->add_option("--seed", run_seed, "override seed_base");
  run->add_option("--out", run_out, "override output CSV path");
  run->add_option("--alpha", run_alphas, "override alpha sweep values");
  run->add_option("--trials", run_trials, "override trial count");
  run->add_flag("--with-uniform", run_uniform, "add the uniform sampling baseline arm");

  auto* gen = app.add_subcommand("gen", "generate a synthetic matrix file");
  std::string gen_spec;
  long long gen_seed = -1;
  std::string gen_out;
  gen->add_option("spec", gen_spec, "synthetic spec file (dataset keys)")->required();
  gen->add_option("--seed", gen_seed, "override the spec seed");
  gen->add_option("--out", gen_out, "output matrix path")->required();

  auto* eval = app.add_subcommand("eval", "report errors for a given column subset");
  std::string eval_matrix, eval_columns;
  long long eval_k = 0;
  eval->add_option("--matrix", eval_matrix, "dense matrix text file")->required();
  eval->add_option("--columns", eval_columns, "comma separated 0-based column indices")->required();
  eval->add_option("--k", eval_k, "oracle rank for ||M - M_k||_F (default |columns|)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(run_config, run_jobs, run_seed, run_out, run_alphas, run_trials, run_uniform);
    if (gen->parsed()) return cmd_gen(gen_spec, gen_seed, gen_out);
    if (eval->parsed()) return cmd_eval(eval_matrix, eval_columns, static_cast<css::Index>(eval_k));
  } catch (const css::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const css::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
