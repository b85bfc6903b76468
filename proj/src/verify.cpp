#include "cohom1/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace cohom1 {

namespace {

RegressionCase rc(const std::string& name, int m, int k, int eps, double theta, double s4, double s5) {
  RegressionCase c;
  c.name = name;
  c.mp = make_model(m, k, eps);
  c.sp.theta = theta;
  c.sp.s4 = s4;
  c.sp.s5 = s5;
  return c;
}

}  // namespace

std::vector<RegressionCase> regression_set() {
  const double pi = 3.14159265358979323846;
  return {
      rc("m1k1 ALC", 1, 1, 0, pi / 2, 0, 0),
      rc("m1k1 ACP", 1, 1, 0, pi / 2, 1, 0),
      rc("m1k1 AH", 1, 1, 1, pi / 2, 0, 1),
      rc("m1k1 AC", 1, 1, 1, pi / 2, 1, 1),
      rc("m1k2 ALC", 1, 2, 0, pi / 4, 0, 0),
      rc("m1k2 ACP", 1, 2, 0, pi / 4, 2, 0),
      rc("m1k2 AH", 1, 2, 1, pi / 4, 0, 0.5),
      rc("m1k2 AC", 1, 2, 1, pi / 4, 3, 2),
      rc("m1k1 theta0", 1, 1, 0, 0, 0, 0),
      rc("m1k3 theta0", 1, 3, 0, 0, 0, 0),
      rc("m1k4 theta0", 1, 4, 0, 0, 0, 0),
      rc("m1k5 theta0", 1, 5, 0, 0, 0, 0),
      rc("m1k1 thetapi", 1, 1, 0, pi, 0, 0),
      rc("m1k2 thetapi", 1, 2, 0, pi, 0, 0),
      rc("m1k3 thetapi", 1, 3, 0, pi, 0, 0),
      rc("m1k5 steady s4", 1, 5, 0, 0.05, 30, 0),
      rc("m1k6 expanding", 1, 6, 1, pi / 3, 100, 1),
      rc("m0k3 steady s4", 0, 3, 0, pi, 10, 0),
      rc("m2k1 ALC", 2, 1, 0, 1.0, 0, 0),
      rc("m2k7 expanding", 2, 7, 1, pi / 2, 5, 1),
  };
}

double max_qflow_random(const ModelParams& mp, long n, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto logz = [&] { return std::pow(10.0, -4.0 + 4.0 * u(rng)); };
  double worst = 0;
  for (long i = 0; i < n; ++i) {
    PhasePoint p{};
    p[iX1] = u(rng);
    p[iX2] = u(rng);
    p[iX3] = u(rng);
    p[iZ1] = logz();
    p[iZ2] = logz();
    p[iZ3] = logz();
    p[iZ4] = std::sqrt(p[iZ2] * p[iZ3]);
    p[iW] = mp.epsilon == 1 ? logz() : 0.0;
    worst = std::max(worst, std::fabs(q_flow_consistency(p, mp)));
  }
  return worst;
}

VerifyReport run_verify(long audit_samples, std::uint64_t rng_seed, int jobs) {
  VerifyReport r;
  r.catalog_ok = true;
  for (int m = 0; m <= 3; ++m)
    for (int eps = 0; eps <= 1; ++eps) {
      r.catalogs.push_back(catalog_audit(make_model(m, 1, eps)));
      r.catalog_ok = r.catalog_ok && r.catalogs.back().ok;
    }

  r.audit_ok = true;
  // the K-factor only exists for m >= 1
  for (int m = 1; m <= 2; ++m) {
    r.audits.push_back(boundary_sign_audit(make_model(m, 1, 0), audit_samples, rng_seed + m));
    r.audit_ok = r.audit_ok && r.audits.back().ok;
  }

  const auto cases = regression_set();
  r.runs.resize(cases.size());
  const IntegratorConfig cfg;
  const int nt = std::max(1, std::min<int>(jobs, (int)cases.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < cases.size(); i += nt) {
        RegressionRow& row = r.runs[i];
        row.name = cases[i].name;
        const Shot s = shoot(cases[i].mp, cases[i].sp, cfg);
        row.cls = s.cls;
        row.status = to_string(s.tr.status);
        row.drift = monitor_drift(s.tr);
        row.ok = s.tr.status != Status::NumericalFailure && s.tr.status != Status::LeftRS &&
                 row.drift.max_constraint < cfg.constraint_tol &&
                 (!row.drift.einstein || row.drift.max_einstein < 10 * cfg.constraint_tol);
      }
    });
  for (auto& th : pool) th.join();

  r.drift_ok = true;
  for (const auto& row : r.runs) {
    r.max_constraint = std::max(r.max_constraint, row.drift.max_constraint);
    if (row.drift.einstein) r.max_einstein = std::max(r.max_einstein, row.drift.max_einstein);
    r.drift_ok = r.drift_ok && row.ok;
  }

  for (int m = 0; m <= 3; ++m)
    for (int eps = 0; eps <= 1; ++eps)
      r.max_qflow_random = std::max(r.max_qflow_random, max_qflow_random(make_model(m, 1, eps), 10000 / 8 + 1,
                                                                         rng_seed ^ (0x9e3779b97f4a7c15ULL * (2 * m + eps + 1))));
  r.qflow_ok = r.max_qflow_random < 1e-12;
  r.ok = r.catalog_ok && r.audit_ok && r.drift_ok && r.qflow_ok;
  return r;
}

}  // namespace cohom1
