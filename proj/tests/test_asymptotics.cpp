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

PhasePoint find(const ModelParams& mp, const std::string& id) {
  for (const auto& e : critical_point_catalog(mp))
    if (e.id == id) return e.point;
  FAIL("missing catalog entry " << id);
  return {};
}

}  // namespace

TEST_CASE("catalog points, hand values") {
  const ModelParams mp = make_model(1, 1, 0);
  const PhasePoint p2 = find(mp, "p2");
  const PhasePoint want{1. / 7, 1. / 7, 1. / 7, 1, 25. / 441, 1. / 441, 5. / 441, 0};
  for (int i = 0; i < 8; ++i) CHECK(p2[i] == doctest::Approx(want[i]).epsilon(1e-14));

  const PhasePoint q1 = find(mp, "q1");
  CHECK(q1[iZ2] == doctest::Approx(5. / 288).epsilon(1e-14));
  CHECK(1. / 6 + 48 * q1[iZ2] - 1 == doctest::Approx(0).scale(1e-14));

  const PhasePoint q2 = find(mp, "q2");
  const PhasePoint w2{0, 1. / 6, 1. / 6, 0, 4. / 144, 1. / 144, 2. / 144, 0};
  for (int i = 0; i < 8; ++i) CHECK(q2[i] == doctest::Approx(w2[i]).epsilon(1e-14));

  const PhasePoint q0 = find(make_model(2, 1, 1), "q0");
  CHECK(q0[iX1] == doctest::Approx(1. / 11));
  CHECK(q0[iW] == doctest::Approx(2. / 11));
}

TEST_CASE("catalog audit passes for m = 0..3") {
  for (int m = 0; m <= 3; ++m)
    for (int eps = 0; eps <= 1; ++eps) {
      const CatalogAudit a = catalog_audit(make_model(m, 1, eps));
      CHECK(a.ok);
      for (const auto& r : a.rows) {
        CAPTURE(r.id);
        CHECK(r.v_norm < 1e-12);
        CHECK(std::fabs(r.residual) < 1e-12);
      }
    }
}

TEST_CASE("classification examples") {
  const Shot a = run(1, 1, 0, pi / 2, 0, 0);
  CHECK(a.cls.label == Label::ALC);
  CHECK(a.cls.limit_point == "q2");
  CHECK(a.cls.nu2 == doctest::Approx(0.5).epsilon(2e-3));

  const Shot h = run(1, 1, 1, pi / 2, 0, 1);
  CHECK(h.cls.label == Label::AH);
  const PhasePoint p = h.tr.samples.back().p();
  for (int i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(1. / 7).epsilon(1e-3));
  CHECK(p[iW] == doctest::Approx(2. / 7).epsilon(1e-3));

  const Shot c = run(1, 3, 0, pi, 0, 0);
  CHECK(c.cls.label == Label::Incomplete);

  IntegratorConfig lng;
  lng.eta_max = 4000;  // 1 + Q decays like 1/eta
  const Shot d = run(1, 1, 1, pi / 2, 1, 1, lng);
  CHECK(d.cls.label == Label::AC);
  CHECK(d.tr.samples.back().d.Q == doctest::Approx(-1).epsilon(1e-3));
}

TEST_CASE("theta = 0 runs stay on the Fubini-Study set") {
  for (int k : {1, 2, 4, 5}) {
    const Shot s = run(1, k, 0, 0, 0, 0);
    for (const auto& smp : s.tr.samples) {
      const PhasePoint p = smp.p();
      REQUIRE(std::fabs(p[iX2] - p[iX3]) < 1e-9);
      REQUIRE(std::fabs(p[iZ2] - p[iZ3]) < 1e-9);
    }
    if (s.cls.outcome == Outcome::StaysInB) CHECK(s.cls.nu2 == doctest::Approx(1).epsilon(1e-2));
  }
}

TEST_CASE("reconstruction invariants") {
  for (const auto& s : {run(1, 2, 0, 1, 0.5, 0), run(1, 1, 1, 0.4, 0, 2)}) {
    const MetricProfile prof = reconstruct(s.tr, s.tr.mp);
    REQUIRE(prof.size() == s.tr.samples.size());
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const Sample& smp = s.tr.samples[i];
      const PhasePoint p = smp.p();
      const double wt = std::exp(smp.ln_wt);
      CHECK(prof[i].a * prof[i].a == doctest::Approx(p[iZ1] * wt / p[iZ2]).epsilon(1e-10));
      CHECK(prof[i].b * prof[i].b == doctest::Approx(wt / p[iZ2]).epsilon(1e-10));
      CHECK(prof[i].c * prof[i].c == doctest::Approx(wt / p[iZ4]).epsilon(1e-10));
      if (i > 0) CHECK(prof[i].t > prof[i - 1].t);
    }
    // a ~ k t near the singular orbit
    CHECK(prof.front().a / prof.front().t == doctest::Approx(s.tr.mp.k).epsilon(1e-2));
  }
}

TEST_CASE("AH rates") {
  const Shot s = run(1, 1, 1, pi / 2, 0, 1);
  const MetricProfile prof = reconstruct(s.tr, s.tr.mp);
  const ProfileRow& r = prof.back();
  const double rate = std::sqrt(1.0 / 14);
  CHECK(r.adot / r.a == doctest::Approx(rate).epsilon(1e-3));
  CHECK(r.bdot / r.b == doctest::Approx(rate).epsilon(1e-3));
  CHECK(r.cdot / r.c == doctest::Approx(rate).epsilon(1e-3));
}

TEST_CASE("reconstruct rejects a wrong normalization on expanding runs") {
  const Shot s = run(1, 1, 1, pi / 2, 0, 1);
  CHECK_THROWS(reconstruct(s.tr, s.tr.mp, 2.0));
}
