#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hfdae/dae_solver.hpp"
#include "hfdae/errors.hpp"
#include "hfdae/frac_ops.hpp"
#include "hfdae/hf_core.hpp"
#include "hfdae/oracles.hpp"
#include "hfdae/problems.hpp"

namespace py = pybind11;
using namespace hfdae;

namespace {

template <class Range>
std::vector<double> to_vector(const Range& r) {
    return {r.begin(), r.end()};
}

py::dict solve_to_dict(const std::string& name, double alpha, std::size_t m) {
    const ProblemId id = parse_problem_id(name);
    const FdaeProblem problem = build_problem(id, alpha);
    SolutionGrid sol;
    {
        py::gil_scoped_release release;
        sol = solve(problem, SolverConfig{.m = m});
    }
    py::dict out;
    out["t"] = sol.grid.nodes();
    std::vector<std::vector<double>> y;
    for (std::size_t i = 0; i < sol.n; ++i) y.push_back(sol.unknown(i));
    out["y"] = y;
    out["names"] = problem.unknown_names;
    out["converged"] = sol.converged();
    out["failed_node"] = sol.converged() ? py::none() : py::cast(sol.failed_node);
    out["newton_iters"] = sol.newton_iters;
    const auto exact = oracles::exact_solution(id, alpha);
    out["max_errors"] = (exact && sol.converged()) ? py::cast(error_report(sol, *exact)) : py::none();
    return out;
}

}  // namespace

PYBIND11_MODULE(_hfdae, mod) {
    mod.doc() = "Hybrid-function operators and fractional DAE solver";

    py::register_exception<SamplingError>(mod, "SamplingError", PyExc_ValueError);
    py::register_exception<CatalogError>(mod, "CatalogError", PyExc_KeyError);
    py::register_exception<EvaluationError>(mod, "EvaluationError", PyExc_ArithmeticError);
    py::register_exception<OracleError>(mod, "OracleError", PyExc_RuntimeError);

    py::class_<Grid>(mod, "Grid")
        .def(py::init<double, double, std::size_t>(), py::arg("t_start"), py::arg("t_end"), py::arg("m"))
        .def_property_readonly("t_start", &Grid::t_start)
        .def_property_readonly("t_end", &Grid::t_end)
        .def_property_readonly("m", &Grid::m)
        .def_property_readonly("h", &Grid::h)
        .def("node", &Grid::node)
        .def("nodes", &Grid::nodes)
        .def("__repr__", [](const Grid& g) {
            return "Grid(" + std::to_string(g.t_start()) + ", " + std::to_string(g.t_end()) + ", " +
                   std::to_string(g.m()) + ")";
        });

    py::class_<HfSeries>(mod, "HfSeries")
        .def_property_readonly("grid", &HfSeries::grid)
        .def_property_readonly("cs", [](const HfSeries& s) { return to_vector(s.cs()); })
        .def_property_readonly("ds", [](const HfSeries& s) { return to_vector(s.ds()); })
        .def_property_readonly("tail", &HfSeries::tail)
        .def("node_values", &HfSeries::node_values);

    mod.def("expand_samples",
            [](const std::vector<double>& samples, const Grid& grid) { return expand_samples(samples, grid); },
            py::arg("samples"), py::arg("grid"));
    mod.def("expand_function", [](const ScalarFn& f, const Grid& grid) { return expand_function(f, grid); },
            py::arg("f"), py::arg("grid"));
    mod.def("evaluate", &evaluate, py::arg("series"), py::arg("t"));

    mod.def("gamma_fn", &gamma_fn, py::arg("x"));
    mod.def(
        "op_matrices",
        [](double alpha, std::size_t m, double t_end) {
            const auto ops = build_op_matrices(alpha, Grid::over(t_end, m));
            py::dict out;
            out["ss"] = to_vector(ops.p_ss.row());
            out["st"] = to_vector(ops.p_st.row());
            out["ts"] = to_vector(ops.p_ts.row());
            out["tt"] = to_vector(ops.p_tt.row());
            return out;
        },
        py::arg("alpha"), py::arg("m"), py::arg("t_end") = 1.0,
        "First rows of the four operational matrices.");
    mod.def("frac_integrate", py::overload_cast<const HfSeries&, double>(&frac_integrate), py::arg("series"),
            py::arg("alpha"));
    mod.def(
        "toeplitz_apply",
        [](const std::vector<double>& coeffs, const std::vector<double>& row) {
            return toeplitz_apply(coeffs, UpperToeplitz(row));
        },
        py::arg("coeffs"), py::arg("row"));

    mod.def("rl_integral_power", &oracles::rl_integral_power, py::arg("p"), py::arg("alpha"), py::arg("t"));
    mod.def(
        "rl_integral_quadrature",
        [](const std::function<double(double)>& f, double alpha, double t, double tol) {
            return oracles::rl_integral_quadrature(f, alpha, t, {.tol = tol});
        },
        py::arg("f"), py::arg("alpha"), py::arg("t"), py::arg("tol") = 1e-12);

    mod.def("problem_ids", [] {
        std::vector<std::string> out;
        for (ProblemId id : kAllProblems) out.emplace_back(to_string(id));
        return out;
    });
    mod.def(
        "has_exact_solution",
        [](const std::string& name, double alpha) {
            return oracles::exact_solution(parse_problem_id(name), alpha).has_value();
        },
        py::arg("problem"), py::arg("alpha"));
    mod.def("solve_problem", &solve_to_dict, py::arg("problem"), py::arg("alpha"), py::arg("m"),
            "Solve a catalog problem; returns nodes, values per unknown and diagnostics.");
}
