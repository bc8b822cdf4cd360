#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "zpole/absint.hpp"
#include "zpole/genus0.hpp"
#include "zpole/theta.hpp"
#include "zpole/verify.hpp"

namespace py = pybind11;
using namespace zpole;

namespace {

PeriodMatrix period_from(const CMat& omega) { return PeriodMatrix(omega); }

// Error codes surface as ValueError with the code name leading the message.
void translate(std::exception_ptr p) {
  try {
    if (p) std::rethrow_exception(p);
  } catch (const Error& e) {
    PyErr_SetString(PyExc_ValueError, e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_zpole, m) {
  m.doc() = "Zero-pole interpolation on genus 0 and genus 1 surfaces";
  py::register_exception_translator(&translate);

  m.def("theta", [](const CVec& z, const CMat& omega) { return ThetaEngine(period_from(omega)).theta(z); },
        py::arg("z"), py::arg("omega"));
  m.def("theta_char",
        [](const RVec& a, const RVec& b, const CVec& z, const CMat& omega) {
          return ThetaEngine(period_from(omega)).theta_char({a, b}, z);
        },
        py::arg("a"), py::arg("b"), py::arg("z"), py::arg("omega"));
  m.def("theta_gradient",
        [](const RVec& a, const RVec& b, const CVec& z, const CMat& omega) {
          return ThetaEngine(period_from(omega)).gradient({a, b}, z);
        },
        py::arg("a"), py::arg("b"), py::arg("z"), py::arg("omega"));

  py::class_<Torus, std::shared_ptr<Torus>>(m, "Torus")
      .def(py::init<cplx>(), py::arg("tau"))
      .def_property_readonly("tau", &Torus::tau)
      .def("prime_form", &Torus::prime_form)
      .def("odd_log_derivative", &Torus::odd_log_derivative)
      .def("theta_char", [](const Torus& t, double a, double b, cplx w) {
        return t.theta_char(Characteristic::scalar(a, b), w);
      });

  m.def("fay_residual",
        [](cplx tau, cplx z, cplx p, cplx q, cplx lam, cplx mu) {
          return fay_residual(Torus(tau), z, p, q, lam, mu);
        },
        py::arg("tau"), py::arg("z"), py::arg("p"), py::arg("q"), py::arg("lam"), py::arg("mu"));

  m.def("sylvester_coefficients", &sylvester_coefficients, py::arg("zeros"), py::arg("poles"));

  py::class_<RationalMatrixFunction>(m, "RationalMatrixFunction")
      .def_property_readonly("rank", &RationalMatrixFunction::rank)
      .def("__call__", &RationalMatrixFunction::operator())
      .def("inverse", &RationalMatrixFunction::inverse);
  m.def("solve_genus0",
        [](const std::string& problem_json) {
          const Genus0Solution sol = solve_genus0(Genus0Problem::from_json(nlohmann::json::parse(problem_json)));
          return py::make_tuple(sol.function, sol.gamma);
        },
        py::arg("problem_json"), "Returns (T, Gamma) for a problem given as JSON text.");

  m.def("scalar_line_map",
        [](cplx tau, std::vector<cplx> zeros, std::vector<cplx> poles, double a, double b, cplx q,
           cplx Q) {
          auto torus = std::make_shared<const Torus>(tau);
          const Divisor d{std::move(zeros), std::move(poles)};
          const Characteristic chi = Characteristic::scalar(a, b);
          cplx shift = 0;
          for (size_t k = 0; k < d.zeros.size(); ++k) shift += d.zeros[k] - d.poles[k];
          const auto [s, t] = torus->lattice_coords(shift);
          const Characteristic tilde = Characteristic::scalar(a + s, b + t);
          const ScalarMultiplicative prod(torus, d, chi, tilde, q, Q);
          const ScalarPartialFraction pf(torus, d, chi, tilde, q, Q);
          return py::make_tuple(std::function<cplx(cplx)>(prod), std::function<cplx(cplx)>(pf));
        },
        py::arg("tau"), py::arg("zeros"), py::arg("poles"), py::arg("a"), py::arg("b"), py::arg("q"),
        py::arg("Q") = cplx(1.0),
        "Product and partial-fraction forms of the scalar map with the output bundle "
        "shifted so the necessary condition holds.");

  m.def("_run_criterion",
        [](int id, std::uint64_t seed, int samples, double tol_scale) {
          return to_json(run_criterion(id, {seed, samples, tol_scale})).dump();
        },
        py::arg("id"), py::arg("seed") = 7, py::arg("samples") = 0, py::arg("tol_scale") = 1.0);
}
