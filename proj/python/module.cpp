#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

#include "cohom1/io.hpp"
#include "cohom1/verify.hpp"

namespace py = pybind11;
using namespace cohom1;
using nlohmann::json;

namespace {

// dicts go through the same JSON the CLI writes
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ShootParams shoot_params(double theta, double s4, double s5, std::optional<double> eta0) {
  ShootParams sp;
  sp.theta = theta;
  sp.s4 = s4;
  sp.s5 = s5;
  if (eta0) sp.eta0 = *eta0;
  return sp;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cohomogeneity one soliton shooting (C++ core)";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<BracketError>(m, "BracketError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("vector_field", [](const PhasePoint& p, int mm, int eps) { return vector_field(p, make_model(mm, 1, eps)); },
        py::arg("p"), py::arg("m"), py::arg("epsilon") = 0);

  m.def(
      "derived_scalars",
      [](const PhasePoint& p, int mm, int eps) {
        const DerivedScalars d = derived_scalars(p, make_model(mm, 1, eps));
        py::dict r;
        r["G"] = d.G;
        r["H"] = d.H;
        r["Q"] = d.Q;
        r["R1"] = d.R1;
        r["R2"] = d.R2;
        r["R3"] = d.R3;
        r["Rs"] = d.Rs;
        return r;
      },
      py::arg("p"), py::arg("m"), py::arg("epsilon") = 0);

  m.def("constraint_residual", &constraint_residual, py::arg("p"));

  m.def(
      "q_flow_consistency",
      [](const PhasePoint& p, int mm, int eps) { return q_flow_consistency(p, make_model(mm, 1, eps)); },
      py::arg("p"), py::arg("m"), py::arg("epsilon") = 0);

  m.def(
      "critical_points",
      [](int mm, int eps) { return to_py(to_json(catalog_audit(make_model(mm, 1, eps)))); }, py::arg("m"),
      py::arg("epsilon") = 0, "catalog audit: points, |V|, Q, H-1 and residuals");

  m.def(
      "seed",
      [](int mm, int k, double theta, double s4, double s5, int eps, std::optional<double> eta0) {
        return build_seed(make_model(mm, k, eps), shoot_params(theta, s4, s5, eta0));
      },
      py::arg("m"), py::arg("k"), py::arg("theta"), py::arg("s4") = 0.0, py::arg("s5") = 0.0, py::arg("epsilon") = 0,
      py::arg("eta0") = py::none());

  m.def(
      "shoot",
      [](int mm, int k, double theta, double s4, double s5, int eps, double eta_max, bool stop_on_convergence,
         bool samples) {
        RunConfig rc;
        rc.m = mm;
        rc.k = k;
        rc.epsilon = eps;
        rc.theta = theta;
        rc.s4 = s4;
        rc.s5 = s5;
        rc.eta_max = eta_max;
        IntegratorConfig cfg = rc.integrator();
        cfg.stop_on_convergence = stop_on_convergence;
        Shot shot;
        {
          py::gil_scoped_release nogil;
          shot = shoot(rc.model(), rc.shoot(), cfg);
        }
        json j = run_summary(rc, shot);
        if (samples) {
          json eta = json::array(), pts = json::array();
          for (const auto& s : shot.tr.samples) {
            eta.push_back(s.eta);
            pts.push_back(s.p());
          }
          j["eta"] = eta;
          j["points"] = pts;
        }
        return to_py(j);
      },
      py::arg("m"), py::arg("k"), py::arg("theta"), py::arg("s4") = 0.0, py::arg("s5") = 0.0, py::arg("epsilon") = 0,
      py::arg("eta_max") = 60.0, py::arg("stop_on_convergence") = true, py::arg("samples") = false,
      "seed, integrate and classify one run; returns the summary dict");

  m.def(
      "find_alpha",
      [](int mm, int k, double theta, double lo, double hi, double tol, int jobs) {
        ThresholdResult r;
        {
          py::gil_scoped_release nogil;
          r = find_alpha(make_model(mm, k, 0), theta, {lo, hi}, tol, {}, jobs);
        }
        return to_py(to_json(r));
      },
      py::arg("m"), py::arg("k"), py::arg("theta"), py::arg("lo") = 0.0, py::arg("hi") = 100.0, py::arg("tol") = 1e-4,
      py::arg("jobs") = 1);

  m.def(
      "find_theta_star",
      [](int mm, int k, double tol, double eta_max) {
        IntegratorConfig cfg;
        cfg.eta_max = eta_max;
        ThetaStarResult r;
        {
          py::gil_scoped_release nogil;
          r = find_theta_star(make_model(mm, k, 0), tol, cfg);
        }
        return to_py(to_json(r));
      },
      py::arg("m"), py::arg("k"), py::arg("tol") = 0.0, py::arg("eta_max") = 60.0);

  m.def(
      "boundary_sign_audit",
      [](int mm, long n, std::uint64_t seed) {
        AuditReport r;
        {
          py::gil_scoped_release nogil;
          r = boundary_sign_audit(make_model(mm, 1, 0), n, seed);
        }
        return to_py(to_json(r));
      },
      py::arg("m"), py::arg("n"), py::arg("seed") = 1);

  m.def("parse_angle", &parse_angle, py::arg("text"));
}
