#include "cohom1/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace cohom1 {

Shot shoot(const ModelParams& mp, const ShootParams& sp, const IntegratorConfig& cfg) {
  Shot s;
  s.sp = sp;
  s.seed = make_seed(mp, sp, cfg.seed_scale);
  s.tr = integrate(s.seed, mp, cfg, region_watchers(cfg.region_tol));
  s.cls = classify(s.tr, mp, sp, 1e-2, cfg.region_tol);
  return s;
}

namespace {

Probe probe(const ModelParams& mp, const ShootParams& sp, double x, const IntegratorConfig& cfg) {
  const Shot s = shoot(mp, sp, cfg);
  return {x, s.cls.outcome, s.cls.eta_exit};
}

template <class F>
void parallel_for(std::size_t n, int jobs, F f) {
  const int nt = std::max(1, std::min<int>(jobs, (int)n));
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) f(i);
    });
  for (auto& th : pool) th.join();
}

// s4 bisection shared by alpha and beta
ThresholdResult s4_threshold(const ModelParams& mp, ShootParams base, Bracket br, double tol,
                             const IntegratorConfig& cfg, int jobs) {
  if (!(br.lo < br.hi) || !(br.lo >= 0)) throw BracketError("bracket must satisfy 0 <= lo < hi");
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  auto at = [&](double s4) {
    ShootParams sp = base;
    sp.s4 = s4;
    return probe(mp, sp, s4, cfg);
  };
  ThresholdResult r;
  const Probe plo = at(br.lo), phi = at(br.hi);
  r.probes = {plo, phi};
  r.lo_outcome = plo.outcome;
  r.hi_outcome = phi.outcome;
  if (phi.outcome == Outcome::EntersC)
    throw BracketError("invalid bracket: outcome at lo = " + std::to_string(br.lo) + " is " + to_string(plo.outcome) +
                       ", outcome at hi = " + std::to_string(br.hi) + " is " + to_string(phi.outcome));
  if (plo.outcome != Outcome::EntersC) {
    r.estimate = r.lo = r.hi = br.lo;
    r.width = 0;
    r.warning = "lower end already avoids C";
    return r;
  }
  double lo = br.lo, hi = br.hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Probe p = at(mid);
    r.probes.push_back(p);
    if (p.outcome == Outcome::EntersC) lo = mid;
    else hi = mid;
  }
  r.lo = lo;
  r.hi = hi;
  r.width = hi - lo;
  r.estimate = 0.5 * (lo + hi);

  // monotonicity audit on 8 interior points of the original bracket
  r.audit.resize(8);
  parallel_for(8, jobs, [&](std::size_t i) {
    const double x = br.lo + (br.hi - br.lo) * (i + 1) / 9.0;
    r.audit[i] = at(x);
  });
  double smallest_clear = INFINITY;
  for (const auto& p : r.audit) {
    const bool c = p.outcome == Outcome::EntersC;
    if ((p.x < lo && !c) || (p.x > hi && c)) r.monotone = false;
    if (!c) smallest_clear = std::min(smallest_clear, p.x);
  }
  if (!r.monotone) {
    r.warning = "outcome is not monotone in s4 on the audit probes";
    if (smallest_clear < r.lo) {
      r.estimate = smallest_clear;
      r.warning += "; reporting the smallest probed threshold";
    }
  }
  return r;
}

}  // namespace

ThresholdResult find_alpha(const ModelParams& mp, double theta, Bracket bracket, double tol,
                           const IntegratorConfig& cfg, int jobs) {
  if (mp.k < 3) throw std::invalid_argument("find_alpha needs k >= 3");
  ModelParams steady = mp;
  steady.epsilon = 0;
  ShootParams sp;
  sp.theta = theta;
  return s4_threshold(steady, sp, bracket, tol, cfg, jobs);
}

ThetaStarResult find_theta_star(const ModelParams& mp, double tol, const IntegratorConfig& cfg) {
  if (mp.k < 3 || mp.k > 2 * mp.m + 1)
    throw std::invalid_argument("find_theta_star needs 3 <= k <= 2m+1, got k = " + std::to_string(mp.k) +
                                ", m = " + std::to_string(mp.m));
  ModelParams steady = mp;
  steady.epsilon = 0;
  // runs near theta* sit at p2 for a long time, stopping there would end the bisection early
  IntegratorConfig c = cfg;
  c.stop_on_convergence = false;
  auto at = [&](double th) {
    ShootParams sp;
    sp.theta = th;
    return probe(steady, sp, th, c);
  };
  ThetaStarResult r;
  const double pi = 3.14159265358979323846;
  const Probe a = at(0), b = at(pi);
  r.probes = {a, b};
  if (a.outcome != Outcome::EntersA || b.outcome != Outcome::EntersC)
    throw BracketError("theta bracket endpoints give " + to_string(a.outcome) + " and " + to_string(b.outcome));
  double lo = 0, hi = pi;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid <= lo || mid >= hi) break;
    const Probe p = at(mid);
    r.probes.push_back(p);
    if (p.outcome == Outcome::StaysInB) {
      r.theta = mid;
      r.lo = lo;
      r.hi = hi;
      r.stays_in_B = true;
      return r;
    }
    if (p.outcome == Outcome::EntersA) lo = mid;
    else hi = mid;
  }
  r.lo = lo;
  r.hi = hi;
  r.theta = 0.5 * (lo + hi);
  return r;
}

std::vector<double> default_s5_grid() {
  std::vector<double> g;
  for (int i = 0; i < 8; ++i) g.push_back(std::pow(10.0, -2.0 + 4.0 * i / 7.0));
  return g;
}

BetaResult find_beta(const ModelParams& mp, double theta, const std::vector<double>& s5_grid, Bracket bracket,
                     double tol, const IntegratorConfig& cfg, int jobs) {
  if (s5_grid.empty()) throw std::invalid_argument("s5 grid must be nonempty");
  for (double s : s5_grid)
    if (!(s > 0)) throw std::invalid_argument("s5 grid values must be positive");
  BetaResult r;
  r.s5_grid = s5_grid;
  if (mp.k <= 2) {
    r.beta = 0;
    r.note = "k <= 2: every run stays in the invariant set F";
    return r;
  }
  ModelParams ex = mp;
  ex.epsilon = 1;
  std::vector<double> grid = s5_grid;
  grid.insert(grid.begin(), 0.0);
  r.per_s5.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    ShootParams sp;
    sp.theta = theta;
    sp.s5 = grid[i];
    r.per_s5[i] = s4_threshold(ex, sp, bracket, tol, cfg, 1);
  });
  r.beta = 0;
  for (const auto& t : r.per_s5) r.beta = std::max(r.beta, t.estimate);
  return r;
}

std::vector<AtlasNode> atlas(const ModelParams& mp, const std::vector<double>& theta_grid,
                             const std::vector<double>& s4_grid, const std::vector<double>& s5_grid,
                             const IntegratorConfig& cfg, int jobs) {
  std::vector<AtlasNode> nodes;
  for (double th : theta_grid)
    for (double s4 : s4_grid)
      for (double s5 : s5_grid) {
        AtlasNode n;
        n.sp.theta = th;
        n.sp.s4 = s4;
        n.sp.s5 = s5;
        nodes.push_back(n);
      }
  parallel_for(nodes.size(), jobs, [&](std::size_t i) {
    AtlasNode& n = nodes[i];
    try {
      const Shot s = shoot(mp, n.sp, cfg);
      n.cls = s.cls;
      n.status = to_string(s.tr.status);
      n.ok = true;
      const std::size_t stride = std::max<std::size_t>(1, s.tr.samples.size() / 400);
      for (std::size_t j = 0; j < s.tr.samples.size(); j += stride) {
        const PhasePoint p = s.tr.samples[j].p();
        n.eta.push_back(s.tr.samples[j].eta);
        n.z1.push_back(p[iZ1]);
        n.nu.push_back(p[iZ2] > 0 ? std::sqrt(p[iZ3] / p[iZ2]) : std::nan(""));
      }
    } catch (const std::exception& e) {
      n.ok = false;
      n.error = e.what();
    }
  });
  return nodes;
}

}  // namespace cohom1
