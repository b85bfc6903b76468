#include <cmath>

#include "doctest.h"

#include "cohom1/search.hpp"

using namespace cohom1;

namespace {

const double pi = 3.14159265358979323846;

Shot run(int m, int k, int eps, double theta, double s4, double s5, const IntegratorConfig& cfg = {}) {
  ShootParams sp;
  sp.theta = theta;
  sp.s4 = s4;
  sp.s5 = s5;
  return shoot(make_model(m, k, eps), sp, cfg);
}

}  // namespace

TEST_CASE("region membership examples") {
  const ModelParams mp = make_model(1, 1, 0);
  const RegionState a = region_of({1. / 7, 1. / 7, 1. / 7, 1, 1. / 49, 1. / 49, 1. / 49, 0}, mp);
  CHECK(a.in_A);
  CHECK(a.in_B);

  const RegionState c = region_of({0.2, 0.1, 0.1, 1.2, 0.01, 0.01, 0.01, 0}, mp);
  CHECK(c.in_C);
  CHECK_FALSE(c.in_B);

  ShootParams sp;
  sp.theta = pi / 2;
  sp.s4 = 0.5;
  sp.eta0 = -8;
  const PhasePoint s = build_seed(mp, sp);
  const RegionState b = region_of(s, mp);
  CHECK(b.in_F);
  CHECK(b.in_B);
}

TEST_CASE("F2 along the seed tends to -1 + 2/k") {
  for (int k : {1, 2, 3, 6}) {
    ShootParams sp;
    sp.theta = 0.8;
    sp.eta0 = -12;
    const PhasePoint p = build_seed(make_model(1, k, 0), sp);
    CHECK(barrier_F(2, p) == doctest::Approx(-1 + 2.0 / k).epsilon(1e-6).scale(1));
  }
}

TEST_CASE("transition outcomes") {
  CHECK(watch_transitions(run(1, 3, 0, pi, 0, 0).tr, make_model(1, 3, 0)).outcome == Outcome::EntersC);
  CHECK(watch_transitions(run(1, 1, 0, 0, 0, 0).tr, make_model(1, 1, 0)).outcome == Outcome::EntersA);
  const Shot s = run(1, 4, 0, 0, 0, 0);
  CHECK(watch_transitions(s.tr, s.tr.mp).outcome == Outcome::StaysInB);
  CHECK(s.tr.converged_to == "p1");
}

TEST_CASE("no run records both A and C") {
  for (int k = 1; k <= 6; ++k)
    for (double theta : {0.0, 0.6, 1.5, 2.5, pi})
      for (double s4 : {0.0, 2.0}) {
        const Shot s = run(1, k, 0, theta, s4, 0);
        bool a = false, c = false;
        for (const auto& e : s.tr.events) {
          a = a || e.name == "enter_A";
          c = c || e.name == "enter_C";
        }
        CAPTURE(k);
        CAPTURE(theta);
        CHECK_FALSE((a && c));
      }
}

TEST_CASE("monotone witnesses") {
  const Shot s = run(1, 1, 0, pi / 2, 1, 0);
  const WitnessReport w = monotone_witnesses(s.tr, s.tr.mp, 1);
  CHECK(w.h_applicable);
  CHECK(w.h_violation < 1e-8);
  CHECK(w.samples_used > 10);

  const Shot e = run(1, 2, 0, 1, 0, 0);
  const WitnessReport we = monotone_witnesses(e.tr, e.tr.mp, 0);
  CHECK_FALSE(we.h_applicable);
  CHECK_FALSE(we.z1_applicable);
  CHECK(we.z_applicable);
  CHECK(we.z_violation < 1e-8);
}

TEST_CASE("boundary sign audit") {
  for (int m : {1, 2}) {
    const AuditReport r = boundary_sign_audit(make_model(m, 1, 0), 2000, 3);
    CHECK(r.ok);
    for (const auto& s : r.strata) {
      CAPTURE(s.name);
      CHECK(s.accepted == 2000);
      if (s.gating) CHECK(s.min_value >= -1e-12);
    }
  }
  CHECK_THROWS(boundary_sign_audit(make_model(1, 1, 0), 0, 1));
}

TEST_CASE("K factor formula") {
  const PhasePoint p{0.3, 0.2, 0.1, 0.5, 0.25, 0.04, 0.1, 0};
  const int m = 2;
  const double want = 1 + (4 * m - 4) * 0.2 - 4 * 0.5 + 2 * 0.5 * (0.5 + 0.2);
  CHECK(k_factor(p, make_model(m, 1, 0)) == doctest::Approx(want));
}
