#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tfe10/acceptance.hpp"
#include "tfe10/branching.hpp"
#include "tfe10/cli.hpp"
#include "tfe10/continuation.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/similarity.hpp"
#include "tfe10/spectral.hpp"
#include "tfe10/unstable.hpp"

namespace py = pybind11;
using namespace tfe10;

namespace {

// Record JSON plus the sampled profile; the Python side merges them into a dict.
py::tuple with_profile(const std::string& record, const RadialProfile& p) {
  return py::make_tuple(record, p.y, p.f);
}

Conic conic_from(const std::array<double, 6>& c) { return Conic{c[0], c[1], c[2], c[3], c[4], c[5]}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of tfe10; use the wrappers in the tfe10 package.";
  m.attr("version") = TFE10_VERSION;
  py::register_exception<Error>(m, "TfeError", PyExc_RuntimeError);

  m.def("kernel_mass", [](int dimension, double r_max) { return spectral::kernel_mass(dimension, {}, r_max); },
        py::arg("dimension") = 1, py::arg("r_max") = 200.0);
  m.def("kernel_derivatives_1d", [](double y, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    spectral::kernel_derivatives_1d(y, out);
    return out;
  }, py::arg("y"), py::arg("count") = 11);
  m.def("kernel_values", [](int dimension, double r) {
    const auto v = spectral::radial_kernel_values(dimension, r);
    return py::dict(py::arg("F") = v.F, py::arg("dF") = v.dF, py::arg("d2F") = v.d2F, py::arg("lap4") = v.lap4,
                    py::arg("d_lap4") = v.d_lap4, py::arg("d2_lap4") = v.d2_lap4, py::arg("lap5") = v.lap5);
  }, py::arg("dimension"), py::arg("r"));
  m.def("decay_constant_formula", &spectral::decay_constant_formula, py::arg("order_m") = 5);
  m.def("eigenvalue_linear", &spectral::eigenvalue_linear);

  m.def("alpha0", [](double n, int N) {
    const auto e = similarity::alpha0(n, N);
    return py::make_tuple(e.alpha, e.beta);
  }, py::arg("n"), py::arg("N") = 1);
  m.def("solve_f0", [](double n, int N, std::optional<double> delta, double normalization) {
    similarity::F0Options o;
    o.delta = delta;
    o.normalization = normalization;
    similarity::NonlinearEigenfunction f;
    {
      py::gil_scoped_release release;
      f = similarity::solve_f0(n, N, o);
    }
    return with_profile(similarity::to_json(f), f.profile);
  }, py::arg("n"), py::arg("N") = 1, py::arg("delta") = py::none(), py::arg("normalization") = 1.0);
  m.def("solve_fk_linear", [](int k, double y_max, std::size_t points) {
    const auto f = similarity::solve_fk_linear(k, 1, Grid::uniform(0.0, y_max, points));
    return with_profile(similarity::to_json(f), f.profile);
  }, py::arg("k"), py::arg("y_max") = 15.0, py::arg("points") = 3001);
  m.def("trace_branch", [](double n_max, int N, double n_start) {
    continuation::StepPolicy policy;
    for (int i = 1; i <= 10 && i / 10.0 <= n_max; ++i) policy.checkpoints.push_back(i / 10.0);
    py::gil_scoped_release release;
    return continuation::branch_json(continuation::trace_branch(n_start, n_max, N, policy));
  }, py::arg("n_max"), py::arg("N") = 1, py::arg("n_start") = 1e-3);

  m.def("mu10", [](int N) { return branching::to_json(branching::mu10(N)); }, py::arg("N"));
  m.def("quadratic_branch_count", [](double A, double B, double C, double omega_norm) {
    return branching::to_json(branching::quadratic_branch_count({A, B, C, omega_norm}));
  }, py::arg("A"), py::arg("B"), py::arg("C"), py::arg("omega_norm") = 0.0);
  m.def("conic_branch_count", [](const std::array<double, 6>& f1, const std::array<double, 6>& f2) {
    return branching::to_json(branching::conic_branch_count(conic_from(f1), conic_from(f2)));
  }, py::arg("f1"), py::arg("f2"));
  m.def("classify_conic", [](const std::array<double, 6>& c) {
    const auto r = branching::classify_conic(conic_from(c));
    return py::make_tuple(branching::to_string(r.type), r.discriminant);
  }, py::arg("coefficients"));

  m.def("exponents_unstable", [](double n, double p, int N) {
    return unstable::to_json(unstable::exponents_unstable(n, p, N));
  }, py::arg("n"), py::arg("p"), py::arg("N") = 1);
  m.def("p_critical", &unstable::p_critical, py::arg("n"), py::arg("N") = 1);
  m.def("unstable_symbol", &unstable::unstable_symbol);
  m.def("solve_f0_unstable", [](double n, int N) {
    unstable::UnstableProfile r;
    {
      py::gil_scoped_release release;
      r = unstable::solve_f0_unstable(n, N);
    }
    return with_profile(unstable::to_json(r), r.profile.profile);
  }, py::arg("n"), py::arg("N") = 1);

  m.def("run_criterion", [](int id) {
    acceptance::Check c;
    {
      py::gil_scoped_release release;
      c = acceptance::run_criterion(id);
    }
    return py::make_tuple(c.passed, c.name, c.detail);
  }, py::arg("id"));
  m.def("cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "tfe10");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::main(static_cast<int>(argv.size()), argv.data());
  }, py::arg("args"), "Runs the command-line tool in-process and returns its exit code.");
}
