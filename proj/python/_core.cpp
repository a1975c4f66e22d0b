#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gsf/cmtest.hpp"
#include "gsf/error.hpp"
#include "gsf/operators.hpp"
#include "gsf/spec_io.hpp"
#include "gsf/specfun.hpp"

namespace py = pybind11;
using namespace gsf;

namespace {

Route route_of(const std::string& name) {
  if (name == "leibniz") return Route::leibniz;
  if (name == "key_identity") return Route::key_identity;
  if (name == "recursion") return Route::recursion;
  throw py::value_error("route must be leibniz, key_identity or recursion");
}

ScanGrid grid_of(double lo, double hi, int points, double tol) { return ScanGrid::log_spaced(lo, hi, points, tol); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized Stieltjes functions: operators, CM tests and class membership";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<NotAMeasureError>(m, "NotAMeasureError", PyExc_ArithmeticError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);

  m.def("gamma_ratio", [](double a, double b) { return specfun::gamma_ratio(a, b); }, py::arg("a"), py::arg("b"));
  m.def("pochhammer", &specfun::pochhammer, py::arg("a"), py::arg("k"));
  m.def("binomial", &specfun::binomial, py::arg("n"), py::arg("k"));
  m.def("lower_incomplete_gamma", &specfun::lower_incomplete_gamma, py::arg("lam"), py::arg("x"));

  py::class_<GSFunction>(m, "Function")
      .def_static(
          "from_spec",
          [](const std::string& text, std::optional<double> lam) { return io::parse_spec_text(text, lam).function(); },
          py::arg("text"), py::arg("lam") = py::none(), "Build from a JSON spec document.")
      .def_static(
          "load",
          [](const std::string& path, std::optional<double> lam) { return io::load_spec(path, lam).function(); },
          py::arg("path"), py::arg("lam") = py::none())
      .def_property_readonly("lam", &GSFunction::lam)
      .def("__call__", &GSFunction::eval, py::arg("x"))
      .def("eval", &GSFunction::eval, py::arg("x"))
      .def("derivative", &GSFunction::derivative, py::arg("n"), py::arg("x"))
      .def("with_order", &GSFunction::with_order, py::arg("lam"))
      .def("describe", &GSFunction::describe)
      .def("__repr__", &GSFunction::describe);

  m.def(
      "c_op",
      [](const GSFunction& f, int k, double x, const std::string& route) { return c_op(f, k, x, route_of(route)); },
      py::arg("f"), py::arg("k"), py::arg("x"), py::arg("route") = "leibniz");
  m.def("T_op", &T_op, py::arg("f"), py::arg("n"), py::arg("k"), py::arg("x"));
  m.def("g_op", &g_op, py::arg("f"), py::arg("k"), py::arg("x"));
  m.def(
      "c_op_measure_side", [](const GSFunction& f, int k, double x) { return c_op_measure_side(f, k, x); },
      py::arg("f"), py::arg("k"), py::arg("x"));

  m.def(
      "chu_vandermonde",
      [](double lam, int n, int k, int mm) {
        const ChuVandermonde c = chu_vandermonde_check(lam, n, k, mm);
        py::dict d;
        d["lhs"] = c.lhs;
        d["rhs"] = c.rhs;
        d["gap"] = c.gap;
        d["rel_gap"] = c.rel_gap;
        return d;
      },
      py::arg("lam"), py::arg("n"), py::arg("k"), py::arg("m"));

  m.def(
      "cm_check_json",
      [](const GSFunction& f, int N, double lo, double hi, int points, double tol) {
        return io::to_json(cm_check_derivatives(f, N, grid_of(lo, hi, points, tol), tol)).dump();
      },
      py::arg("f"), py::arg("N") = kDefaultCMOrder, py::arg("grid_min") = 1e-3, py::arg("grid_max") = 1e3,
      py::arg("points") = 64, py::arg("tol") = kDefaultCMTolerance, py::call_guard<py::gil_scoped_release>());
  m.def(
      "class_membership_json",
      [](const GSFunction& f, int N, double lo, double hi, int points, double tol) {
        return io::to_json(class_membership(f, N, grid_of(lo, hi, points, tol), tol)).dump();
      },
      py::arg("f"), py::arg("N") = kDefaultCMOrder, py::arg("grid_min") = 1e-3, py::arg("grid_max") = 1e3,
      py::arg("points") = 64, py::arg("tol") = kDefaultCMTolerance, py::call_guard<py::gil_scoped_release>());
}
