#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "msmm/cli.hpp"
#include "msmm/diagnostics.hpp"
#include "msmm/dp_mixture.hpp"
#include "msmm/errors.hpp"
#include "msmm/fay_herriot.hpp"
#include "msmm/moran_basis.hpp"
#include "msmm/msm.hpp"
#include "msmm/simulation.hpp"
#include "msmm/synthetic.hpp"
#include "msmm/tabulation.hpp"

namespace py = pybind11;
using namespace msmm;

namespace {

McmcConfig mcmc(int iterations, int burn_in, int thin, std::uint64_t seed) {
  return {iterations, burn_in, thin, seed};
}

py::dict to_dict(const PosteriorDraws& d) {
  py::dict out;
  out["model"] = d.model;
  out["y"] = d.y;
  if (d.beta.size() > 0) out["beta"] = d.beta;
  if (d.eta.size() > 0) out["eta"] = d.eta;
  for (const auto& [name, trace] : d.scalars) out[py::str(name)] = trace;
  if (d.assignments.size() > 0) out["assignments"] = d.assignments;
  out["warnings"] = d.warnings;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spatial mixed-effects and Dirichlet-process mixture models for small-area tables";

  py::register_exception<Error>(m, "MsmmError");

  py::class_<MoranBasis>(m, "Basis")
      .def_readonly("psi", &MoranBasis::psi)
      .def_readonly("eigenvalues", &MoranBasis::eigenvalues)
      .def_readonly("k_inv", &MoranBasis::k_inv)
      .def_readonly("k", &MoranBasis::k)
      .def_readonly("positive_count", &MoranBasis::positive_count)
      .def_readonly("spectrum", &MoranBasis::spectrum)
      .def_property_readonly("rank", &MoranBasis::rank);

  m.def("delta_method_variance", &delta_method_variance, py::arg("estimate"), py::arg("std_err"));

  m.def(
      "log_transform",
      [](const std::string& path) {
        const auto table = load_tabulation(path);
        const auto logs = log_transform(table);
        return py::make_tuple(logs.z, logs.d, logs.areas, logs.cells);
      },
      py::arg("path"), "Reads a tabulation CSV and returns (z, d, areas, cells).");

  m.def(
      "build_basis",
      [](const std::vector<std::pair<std::string, std::string>>& edges,
         const std::vector<std::string>& areas, int cells, const Eigen::MatrixXd& x,
         double fraction) {
        std::vector<Edge> e(edges.begin(), edges.end());
        return build_moran_basis(x, build_spatial_structure(e, areas, cells),
                                 BasisSize::fraction(fraction));
      },
      py::arg("edges"), py::arg("areas"), py::arg("cells"), py::arg("x"),
      py::arg("fraction") = BasisSize::kDefaultFraction);

  m.def(
      "fit_msm",
      [](const Eigen::VectorXd& z, const Eigen::VectorXd& d, int cells, const Eigen::MatrixXd& x,
         const MoranBasis& basis, int iterations, int burn_in, int thin, std::uint64_t seed) {
        MsmConfig cfg;
        cfg.mcmc = mcmc(iterations, burn_in, thin, seed);
        py::gil_scoped_release release;
        auto draws = fit_msm(LogTable(z, d, cells), x, basis, cfg);
        py::gil_scoped_acquire acquire;
        return to_dict(draws);
      },
      py::arg("z"), py::arg("d"), py::arg("cells"), py::arg("x"), py::arg("basis"),
      py::arg("iterations") = 10000, py::arg("burn_in") = 5000, py::arg("thin") = 1,
      py::arg("seed") = 1);

  m.def(
      "fit_fh",
      [](const Eigen::VectorXd& z, const Eigen::VectorXd& d, int cells, const Eigen::MatrixXd& x,
         int iterations, int burn_in, int thin, std::uint64_t seed) {
        FhConfig cfg;
        cfg.mcmc = mcmc(iterations, burn_in, thin, seed);
        py::gil_scoped_release release;
        auto draws = fit_fh(LogTable(z, d, cells), x, cfg);
        py::gil_scoped_acquire acquire;
        return to_dict(draws);
      },
      py::arg("z"), py::arg("d"), py::arg("cells"), py::arg("x"),
      py::arg("iterations") = 10000, py::arg("burn_in") = 5000, py::arg("thin") = 1,
      py::arg("seed") = 1);

  m.def(
      "fit_msmm",
      [](const Eigen::VectorXd& z, const Eigen::VectorXd& d, int cells, const Eigen::MatrixXd& x,
         const MoranBasis& basis, const std::string& algorithm, int truncation, int iterations,
         int burn_in, int thin, std::uint64_t seed) {
        MixtureConfig cfg;
        if (algorithm == "truncated")
          cfg.algorithm = MixtureAlgorithm::Truncated;
        else if (algorithm != "dp")
          throw ConfigError("algorithm must be 'dp' or 'truncated'");
        cfg.truncation = truncation;
        cfg.mcmc = mcmc(iterations, burn_in, thin, seed);
        py::gil_scoped_release release;
        auto draws = fit_msmm(LogTable(z, d, cells), x, basis, cfg);
        py::gil_scoped_acquire acquire;
        return to_dict(draws);
      },
      py::arg("z"), py::arg("d"), py::arg("cells"), py::arg("x"), py::arg("basis"),
      py::arg("algorithm") = "dp", py::arg("truncation") = 25, py::arg("iterations") = 10000,
      py::arg("burn_in") = 5000, py::arg("thin") = 1, py::arg("seed") = 1);

  m.def(
      "two_field_fixture",
      [](int rows, int cols, int cells) {
        TwoFieldOptions opts;
        opts.rows = rows;
        opts.cols = cols;
        opts.cells = cells;
        const auto f = make_two_field_fixture(opts);
        py::dict out;
        out["z"] = f.truth.z;
        out["d"] = f.truth.d;
        out["cells"] = f.cells;
        out["x"] = f.x;
        out["basis"] = f.basis;
        out["partition"] = f.partition;
        out["areas"] = f.grid.areas;
        return out;
      },
      py::arg("rows") = 6, py::arg("cols") = 6, py::arg("cells") = 4);

  m.def("rand_index", [](const std::vector<int>& a, const std::vector<int>& b) {
    return rand_index(a, b);
  });
  m.def("geweke", [](const std::vector<double>& chain) { return geweke(chain); });
  m.def("gelman_rubin", &gelman_rubin);
  m.def("effective_sample_size",
        [](const std::vector<double>& chain) { return effective_sample_size(chain); });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line interface in-process: (exit code, stdout, stderr).");

  m.attr("__version__") = cli::kVersion;
}
