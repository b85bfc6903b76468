#include <cmath>

#include "doctest.h"

#include "cohom1/search.hpp"

using namespace cohom1;

namespace {
const double pi = 3.14159265358979323846;
}

TEST_CASE("theta* for m = 1, k = 3") {
  const ModelParams mp = make_model(1, 3, 0);
  IntegratorConfig cfg;
  cfg.eta_max = 40;
  const ThetaStarResult ts = find_theta_star(mp, 0, cfg);
  CHECK(ts.theta > 0);
  CHECK(ts.theta < pi);
  CHECK(ts.hi - ts.lo < 1e-12);
  REQUIRE(ts.probes.size() >= 2);
  CHECK(ts.probes[0].outcome == Outcome::EntersA);
  CHECK(ts.probes[1].outcome == Outcome::EntersC);

  ShootParams sp;
  sp.theta = ts.theta;
  const Shot s = shoot(mp, sp, cfg);
  CHECK(s.cls.label == Label::AC);
  CHECK(s.cls.nu2 == doctest::Approx(0.2).epsilon(5e-2));

  // the Ricci-flat run at theta* already avoids C, so alpha is 0 there
  cfg.stop_on_convergence = false;
  const ThresholdResult a = find_alpha(mp, ts.theta, {0, 50}, 1e-4, cfg);
  CHECK(a.estimate <= 1e-4);
  CHECK(a.lo_outcome != Outcome::EntersC);
}

TEST_CASE("theta* for m = 2, k = 3, 4, 5") {
  std::vector<double> found;
  IntegratorConfig cfg;
  cfg.eta_max = 40;
  for (int k = 3; k <= 5; ++k) {
    const ModelParams mp = make_model(2, k, 0);
    const ThetaStarResult ts = find_theta_star(mp, 0, cfg);
    ShootParams sp;
    sp.theta = ts.theta;
    IntegratorConfig c = cfg;
    c.stop_on_convergence = false;
    const Shot s = shoot(mp, sp, c);
    const PhasePoint p = s.tr.samples.back().p();
    CAPTURE(k);
    CHECK(s.cls.outcome == Outcome::StaysInB);
    CHECK(std::sqrt(p[iZ3] / p[iZ2]) == doctest::Approx(1. / 7).epsilon(7e-2));
    for (double t : found) CHECK(std::fabs(t - ts.theta) > 1e-6);
    found.push_back(ts.theta);
  }
}

TEST_CASE("theta* preconditions") {
  CHECK_THROWS(find_theta_star(make_model(1, 4, 0)));
  CHECK_THROWS(find_theta_star(make_model(1, 2, 0)));
}

TEST_CASE("alpha bracket validation") {
  const ModelParams mp = make_model(1, 5, 0);
  CHECK_THROWS_AS(find_alpha(mp, 0.05, {0, 5}), BracketError);  // both ends enter C
  const ThresholdResult clear = find_alpha(mp, 0.05, {100, 200});
  CHECK(clear.estimate == 100);
  CHECK(clear.width == 0);
  CHECK_THROWS(find_alpha(make_model(1, 2, 0), 0.05, {0, 200}));     // k < 3
}

TEST_CASE("alpha threshold separates the outcomes") {
  const ModelParams mp = make_model(1, 5, 0);
  const ThresholdResult r = find_alpha(mp, 0.05, {0, 200}, 1e-6, {}, 4);
  CHECK(r.width <= 1e-6);
  CHECK(r.lo_outcome == Outcome::EntersC);
  CHECK(r.hi_outcome != Outcome::EntersC);
  CHECK(r.estimate > 1e-3);
  CHECK(r.monotone);
}

TEST_CASE("beta is the max over the s5 grid") {
  const ModelParams mp = make_model(1, 5, 1);
  const BetaResult b = find_beta(mp, 0.05, {0.5, 2}, {0, 400}, 1e-3, {}, 4);
  REQUIRE(!b.per_s5.empty());
  double mx = 0;
  for (const auto& r : b.per_s5) mx = std::max(mx, r.estimate);
  CHECK(b.beta == doctest::Approx(mx));
}

TEST_CASE("atlas nodes match single runs") {
  const ModelParams mp = make_model(1, 2, 0);
  const auto nodes = atlas(mp, {0.5, 2.5}, {0, 1}, {0}, {}, 2);
  REQUIRE(nodes.size() == 4);
  for (const auto& n : nodes) {
    REQUIRE(n.ok);
    const Shot s = shoot(mp, n.sp, {});
    CHECK(s.cls.label == n.cls.label);
    CHECK(s.cls.outcome == n.cls.outcome);
  }
}
