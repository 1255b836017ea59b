#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "fracspec/runner.hpp"
#include "fracspec/special.hpp"
#include "fracspec/version.hpp"

namespace py = pybind11;

namespace {

using namespace fracspec;

std::vector<std::vector<double>> dense_rows(const SymmetricMatrix& m) {
  const Matrix& d = m.dense();
  std::vector<std::vector<double>> out(d.rows(), std::vector<double>(d.cols()));
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) out[i][j] = d(i, j);
  return out;
}

Flavor flavor_of(const std::string& name) {
  if (name == "additive") return Flavor::additive;
  if (name == "multiplicative") return Flavor::multiplicative;
  throw py::value_error("flavor must be 'additive' or 'multiplicative'");
}

ScalarField field_from(const FracOperator& op, const py::object& a) {
  if (a.is_none())
    return ScalarField::constant(op.grid, 0.0);
  if (py::isinstance<py::float_>(a) || py::isinstance<py::int_>(a))
    return ScalarField::constant(op.grid, a.cast<double>());
  Vector v = a.cast<Vector>();
  if (v.size() != op.grid->node_count())
    throw py::value_error("coefficient vector length " + std::to_string(v.size()) +
                          " does not match node count " +
                          std::to_string(op.grid->node_count()));
  return ScalarField(op.grid, std::move(v));
}

py::dict cluster_dict(const EigenCluster& c) {
  py::dict d;
  d["center"] = c.center;
  d["indices"] = c.indices;
  d["multiplicity"] = c.multiplicity();
  return d;
}

py::dict solve_py(const FracOperator& op, const std::string& flavor, const py::object& a,
                  double cluster_tol, std::size_t window) {
  const Flavor fl = flavor_of(flavor);
  ScalarField af = a.is_none() && fl == Flavor::multiplicative
                       ? ScalarField::constant(op.grid, 1.0)
                       : field_from(op, a);
  const CoefficientProblem p =
      solve_problem(fl, op, af, cluster_tol, IndexRange{0, window});
  py::dict out;
  out["values"] = p.spectrum.values;
  py::list cl;
  for (const auto& c : p.clusters) cl.append(cluster_dict(c));
  out["clusters"] = cl;
  return out;
}

std::string run_json(const std::string& text, const std::string& base_dir,
                     bool include_timings) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  const ExperimentConfig cfg = parse_config(j, base_dir);
  const ExperimentReport rep = run_experiment(cfg);
  return report_json(rep, include_timings).dump();
}

std::string validate_json(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  const ExperimentConfig cfg = parse_config(j, base_dir);
  return cfg.kind;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "integral fractional Laplacian spectral perturbation laboratory";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NumericalError>(m, "NumericalError");

  m.def("normalization_constant", &frac_normalization, py::arg("dim"), py::arg("s"),
        "kernel normalization C(dim, s) of the integral fractional Laplacian");
  m.def("ball_constant", &ball_constant, py::arg("dim"), py::arg("s"),
        "value of (-Delta)^s applied to (1-|x|^2)_+^s on the unit ball");
  m.def("halfplane_constant", &halfplane_constant, py::arg("s"),
        "one-sided tail integral constant of the half-space barrier");
  m.def("hadamard_constant", &hadamard_constant, py::arg("s"),
        "Gamma(1+s)^2, the boundary-derivative normalization");

  py::class_<FracOperator>(m, "Operator",
                           "collocation discretization of (-Delta)^s with exterior "
                           "Dirichlet condition")
      .def_property_readonly("s", [](const FracOperator& o) { return o.s; })
      .def_property_readonly("dimension",
                             [](const FracOperator& o) { return o.grid->dimension(); })
      .def_property_readonly("node_count",
                             [](const FracOperator& o) { return o.grid->node_count(); })
      .def_property_readonly("h", [](const FracOperator& o) { return o.grid->h(); })
      .def("points",
           [](const FracOperator& o) {
             std::vector<std::vector<double>> pts;
             for (std::size_t p = 0; p < o.grid->node_count(); ++p) {
               const auto x = o.grid->point(p);
               if (o.grid->dimension() == 1)
                 pts.push_back({x[0]});
               else
                 pts.push_back({x[0], x[1]});
             }
             return pts;
           },
           "node coordinates, row per node")
      .def("system_matrix",
           [](const FracOperator& o) { return dense_rows(o.system_matrix()); },
           "dense cell-scaled collocation matrix")
      .def("solve", &solve_py, py::arg("flavor") = "additive",
           py::arg("a") = py::none(), py::arg("cluster_tol") = 1e-6,
           py::arg("window") = 12,
           "solve the eigenproblem; returns {'values', 'clusters'}");

  m.def(
      "assemble_1d",
      [](double s, double lo, double hi, std::size_t n, int threads) {
        AssemblyOptions opts;
        opts.threads = threads;
        return assemble_1d(s, lo, hi, n, opts);
      },
      py::arg("s"), py::arg("lo"), py::arg("hi"), py::arg("n"), py::arg("threads") = 1);
  m.def(
      "assemble_2d_square",
      [](double s, double lo, double hi, std::size_t n, int threads) {
        AssemblyOptions opts;
        opts.threads = threads;
        return assemble_2d_square(s, lo, hi, n, opts);
      },
      py::arg("s"), py::arg("lo"), py::arg("hi"), py::arg("n"), py::arg("threads") = 1,
      "n is the per-axis interior node count (8..48)");

  m.def("run_config_json", &run_json, py::arg("text"), py::arg("base_dir") = ".",
        py::arg("include_timings") = true,
        "run one experiment config (JSON text); returns the report as JSON text");
  m.def("validate_config_json", &validate_json, py::arg("text"), py::arg("base_dir") = ".",
        "parse and validate a config; returns its kind or raises ConfigError");
}
