#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "css/baselines.hpp"
#include "css/datagen.hpp"
#include "css/dense_core.hpp"
#include "css/experiment.hpp"
#include "css/metrics.hpp"
#include "css/oracle.hpp"
#include "css/samplers.hpp"

namespace py = pybind11;
using namespace css;

namespace {

IndexSet to_index_set(Index universe, std::vector<Index> indices) {
  IndexSet set;
  set.universe = universe;
  std::sort(indices.begin(), indices.end());
  set.indices = std::move(indices);
  return set;
}

ObservationMask mask_from_array(const Eigen::MatrixXd& grid) {
  ObservationMask mask(grid.rows(), grid.cols());
  for (Index j = 0; j < grid.cols(); ++j)
    for (Index i = 0; i < grid.rows(); ++i) mask.set(i, j, grid(i, j) != 0.0);
  return mask;
}

}  // namespace

PYBIND11_MODULE(_cssel, m) {
  m.doc() = "column subset selection for partially observed matrices";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "CssParseError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<ColumnSelection>(m, "ColumnSelection")
      .def_readonly("indices", &ColumnSelection::indices)
      .def_readonly("columns", &ColumnSelection::columns);

  py::class_<SamplingWeights>(m, "SamplingWeights")
      .def_readonly("scores", &SamplingWeights::scores)
      .def_readonly("total", &SamplingWeights::total);

  py::class_<Reconstruction>(m, "Reconstruction")
      .def_readonly("coefficients", &Reconstruction::coefficients)
      .def_readonly("approx", &Reconstruction::approx);

  py::class_<NormSamplingResult>(m, "NormSamplingResult")
      .def_readonly("selection", &NormSamplingResult::selection)
      .def_readonly("reconstruction", &NormSamplingResult::reconstruction)
      .def_readonly("weights", &NormSamplingResult::weights);

  py::class_<IterNormResult>(m, "IterNormResult")
      .def_readonly("c", &IterNormResult::c)
      .def_readonly("s", &IterNormResult::s)
      .def_readonly("reconstruction", &IterNormResult::reconstruction)
      .def_readonly("degenerate_early_stop", &IterNormResult::degenerate_early_stop)
      .def_readonly("gram_fallback", &IterNormResult::gram_fallback);

  py::class_<LeverageScoreResult>(m, "LeverageScoreResult")
      .def_readonly("selection", &LeverageScoreResult::selection)
      .def_readonly("scores", &LeverageScoreResult::scores)
      .def_readonly("k_effective", &LeverageScoreResult::k_effective)
      .def_readonly("k_truncated", &LeverageScoreResult::k_truncated);

  py::class_<GroupLassoResult>(m, "GroupLassoResult")
      .def_readonly("selection", &GroupLassoResult::selection)
      .def_readonly("x", &GroupLassoResult::x)
      .def_readonly("lam", &GroupLassoResult::lambda)
      .def_readonly("objective", &GroupLassoResult::objective)
      .def_readonly("kkt_residual", &GroupLassoResult::kkt_residual)
      .def_readonly("converged", &GroupLassoResult::converged);

  py::class_<MatrixOracle>(m, "MatrixOracle")
      .def(py::init<Matrix, std::uint64_t>(), py::arg("hidden"), py::arg("seed"))
      .def_property_readonly("rows", &MatrixOracle::rows)
      .def_property_readonly("cols", &MatrixOracle::cols)
      .def("observe_entry", &MatrixOracle::observe_entry)
      .def("observe_column", &MatrixOracle::observe_column)
      .def("observe_row", &MatrixOracle::observe_row)
      .def_property_readonly("entry_queries", &MatrixOracle::entry_queries)
      .def_property_readonly("column_queries", &MatrixOracle::column_queries)
      .def_property_readonly("row_queries", &MatrixOracle::row_queries)
      .def_property_readonly("total_entries_observed", &MatrixOracle::total_entries_observed)
      .def_property_readonly("distinct_entries", &MatrixOracle::distinct_entries);

  // dense kernels
  m.def(
      "truncated_svd",
      [](const Matrix& mat, Index k) {
        const SvdResult r = truncated_svd(mat, k);
        return py::make_tuple(r.u, r.sigma, r.v);
      },
      py::arg("m"), py::arg("k"));
  m.def(
      "pinv_apply",
      [](const Matrix& c, const Matrix& mat, double tol) { return pinv_apply(c, mat, tol); },
      py::arg("c"), py::arg("m"), py::arg("tol") = kRankTol);
  m.def(
      "subsample_scale",
      [](const Vector& x, std::vector<Index> omega) {
        return subsample_scale(x, to_index_set(x.size(), std::move(omega)));
      },
      py::arg("x"), py::arg("omega"));
  m.def("best_rank_k_error", &best_rank_k_error, py::arg("m"), py::arg("k"));

  // samplers
  m.def("estimate_column_norms", &estimate_column_norms, py::arg("oracle"), py::arg("m1"));
  m.def("active_norm_css", &active_norm_css, py::arg("oracle"), py::arg("s"), py::arg("m1"),
        py::arg("m2"), py::arg("k") = 0, py::arg("with_replacement") = false);
  m.def(
      "iterative_norm_css",
      [](MatrixOracle& oracle, Index k, double m, double epsilon, double delta, bool phase2) {
        IterNormConfig cfg;
        cfg.k = k;
        cfg.m = m;
        cfg.epsilon = epsilon;
        cfg.delta = delta;
        cfg.phase2 = phase2;
        return iterative_norm_css(oracle, cfg);
      },
      py::arg("oracle"), py::arg("k"), py::arg("m"), py::arg("epsilon") = 0.5,
      py::arg("delta") = 0.1, py::arg("phase2") = false);
  m.def("approx_leverage_css", &approx_leverage_css, py::arg("oracle"), py::arg("k"), py::arg("s"),
        py::arg("m"), py::arg("with_replacement") = false);
  m.def(
      "complete_columns",
      [](MatrixOracle& oracle, const Matrix& basis_columns, double m_budget) {
        const OrthoBasis basis = orthonormal_basis(basis_columns);
        return complete_columns(oracle, basis, m_budget);
      },
      py::arg("oracle"), py::arg("basis_columns"), py::arg("m"));
  m.def(
      "subsampled_residual_norm",
      [](const Vector& x_omega, const Matrix& basis_columns, std::vector<Index> omega,
         Index universe, double m_budget) {
        const OrthoBasis basis = orthonormal_basis(basis_columns);
        return subsampled_residual_norm(x_omega, basis, to_index_set(universe, std::move(omega)),
                                        m_budget);
      },
      py::arg("x_omega"), py::arg("basis_columns"), py::arg("omega"), py::arg("universe"),
      py::arg("m"));

  // baselines
  m.def(
      "block_omp_css",
      [](const Matrix& masked, const Matrix& mask, Index s) {
        return block_omp_css(masked, mask_from_array(mask), s);
      },
      py::arg("masked"), py::arg("mask"), py::arg("s"));
  m.def(
      "group_lasso_css",
      [](const Matrix& masked, const Matrix& mask, double lambda, Index max_iters, double tol,
         Index target_s) {
        GroupLassoConfig cfg;
        cfg.lambda = lambda;
        cfg.max_iters = max_iters;
        cfg.tol = tol;
        cfg.target_s = target_s;
        return group_lasso_css(masked, mask_from_array(mask), cfg);
      },
      py::arg("masked"), py::arg("mask"), py::arg("lam"), py::arg("max_iters") = 20000,
      py::arg("tol") = 1e-12, py::arg("target_s") = 0);

  // metrics
  m.def(
      "selection_error",
      [](const Matrix& mat, const Matrix& cols) { return selection_error(mat, cols); },
      py::arg("m"), py::arg("columns"));
  m.def(
      "selection_error_at",
      [](const Matrix& mat, const std::vector<Index>& indices) {
        Matrix cols(mat.rows(), static_cast<Index>(indices.size()));
        for (std::size_t t = 0; t < indices.size(); ++t)
          cols.col(static_cast<Index>(t)) = mat.col(indices[t]);
        return selection_error(mat, cols);
      },
      py::arg("m"), py::arg("indices"));
  m.def("reconstruction_error", &reconstruction_error, py::arg("m"), py::arg("columns"),
        py::arg("x"));
  m.def("vector_incoherence", &vector_incoherence, py::arg("x"));
  m.def(
      "subspace_incoherence",
      [](const Matrix& columns) { return subspace_incoherence(orthonormal_basis(columns)); },
      py::arg("columns"));
  m.def(
      "row_leverage_scores",
      [](const Matrix& mat, Index k) { return row_leverage_scores(mat, k); },
      py::arg("m"), py::arg("k"));
  m.def(
      "error_report",
      [](const Matrix& mat, const std::vector<Index>& indices, Index k) {
        Matrix cols(mat.rows(), static_cast<Index>(indices.size()));
        for (std::size_t t = 0; t < indices.size(); ++t)
          cols.col(static_cast<Index>(t)) = mat.col(indices[t]);
        const Matrix x = pinv_apply(cols, mat);
        const ErrorReport r = make_error_report(mat, cols, &x, k);
        py::dict out;
        out["selection_error"] = r.selection_error;
        out["reconstruction_error"] = *r.reconstruction_error;
        out["oracle_error"] = r.oracle_error;
        out["relative_ratio"] = r.relative_ratio;
        return out;
      },
      py::arg("m"), py::arg("indices"), py::arg("k"));
  m.def(
      "volume_sampling_distribution",
      [](const Matrix& mat, Index k) {
        const auto dist = volume_sampling_distribution(mat, k);
        py::dict out;
        for (const auto& [subset, p] : dist.probs) out[py::tuple(py::cast(subset))] = p;
        return out;
      },
      py::arg("m"), py::arg("k"));

  // data generation
  m.def(
      "gen_lowrank_noise",
      [](Index n1, Index n2, Index k, double sigma, std::uint64_t seed) {
        SyntheticSpec spec;
        spec.n1 = n1;
        spec.n2 = n2;
        spec.k = k;
        spec.sigma = sigma;
        spec.seed = seed;
        return gen_lowrank_noise(spec);
      },
      py::arg("n1"), py::arg("n2"), py::arg("k"), py::arg("sigma") = 0.0, py::arg("seed") = 0);
  m.def(
      "gen_coherent",
      [](Index n1, Index n2, Index k, double sigma, Index repeated, double scale,
         std::uint64_t seed) {
        SyntheticSpec spec;
        spec.n1 = n1;
        spec.n2 = n2;
        spec.k = k;
        spec.sigma = sigma;
        spec.repeated = repeated;
        spec.scale = scale;
        spec.seed = seed;
        return gen_coherent(spec);
      },
      py::arg("n1"), py::arg("n2"), py::arg("k"), py::arg("sigma") = 0.0, py::arg("repeated") = 5,
      py::arg("scale") = 10.0, py::arg("seed") = 0);
  m.def("load_dense_text", &load_dense_text, py::arg("path"));
  m.def("save_dense_text", &save_dense_text, py::arg("m"), py::arg("path"));
  m.def("load_sign_matrix", &load_sign_matrix, py::arg("path"));
  m.def("load_grayscale", &load_grayscale, py::arg("path"));
  m.def("split_windows", &split_windows, py::arg("m"), py::arg("k"), py::arg("eps"));
}
