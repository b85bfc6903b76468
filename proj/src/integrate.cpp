#include "cohom1/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cohom1/asymptotics.hpp"
#include "cohom1/rkf78.hpp"

namespace cohom1 {

std::string to_string(Status s) {
  switch (s) {
    case Status::ReachedHorizon: return "ReachedHorizon";
    case Status::ConvergedToCriticalPoint: return "ConvergedToCriticalPoint";
    case Status::LeftRS: return "LeftRS";
    case Status::NumericalFailure: return "NumericalFailure";
    case Status::StoppedByEvent: return "StoppedByEvent";
    case Status::Escaped: return "Escaped";
  }
  return "?";
}

namespace {

using LD = long double;
constexpr std::size_t N = 11;  // phase state, ln W~, t, f
using State = std::array<LD, N>;
using Stepper = Rkf78<LD, N>;

struct Rhs {
  int m, eps;
  void operator()(const State& y, State& dy) const {
    std::array<LD, 8> p, v;
    std::copy_n(y.begin(), 8, p.begin());
    field(p, m, eps, v);
    std::copy_n(v.begin(), 8, dy.begin());
    const Kernel<LD> s = kernel(p, m, eps);
    dy[8] = 2 * s.g;
    dy[9] = std::exp(y[8] / 2);
    dy[10] = s.Hm1;
  }
};

PhasePoint to_point(const State& y) {
  PhasePoint p;
  for (int i = 0; i < 8; ++i) p[i] = (double)y[i];
  p[0] = (double)(1 + y[0]);
  return p;
}

Sample make_sample(double eta, const State& y, const ModelParams& mp) {
  Sample s;
  s.eta = eta;
  std::array<LD, 8> p;
  std::copy_n(y.begin(), 8, p.begin());
  for (int i = 0; i < 8; ++i) s.y[i] = (double)y[i];
  const Kernel<LD> k = kernel(p, mp.m, mp.epsilon);
  s.d.Gm1 = (double)k.Gm1;
  s.d.Hm1 = (double)k.Hm1;
  s.d.G = (double)(1 + k.Gm1);
  s.d.H = (double)(1 + k.Hm1);
  s.d.Q = (double)k.Q;
  s.d.R1 = (double)k.R1;
  s.d.R2 = (double)k.R2;
  s.d.R3 = (double)k.R3;
  s.d.Rs = (double)k.Rs;
  s.ln_wt = (double)y[8];
  s.t = (double)y[9];
  s.f = (double)y[10];
  return s;
}

bool crossed(double prev, double now, int direction) {
  if (direction < 0) return prev > 0 && now <= 0;
  if (direction > 0) return prev < 0 && now >= 0;
  return (prev > 0 && now <= 0) || (prev < 0 && now >= 0);
}

// Gauss-Newton onto {Q = 0, H = 1}. Nonzero X moves freely, Z and W move relative to
// their size so zero coordinates (and the invariant faces they sit on) are left alone.
// Returns max(|Q|, |H-1|) before the correction.
LD project_einstein(State& y, int m, int eps) {
  std::array<LD, 8> p;
  std::copy_n(y.begin(), 8, p.begin());
  const Kernel<LD> s0 = kernel(p, m, eps);
  const LD before = std::max(std::fabs(s0.Q), std::fabs(s0.Hm1));
  if (before == 0) return 0;
  const LD mm = m;
  for (int it = 0; it < 2; ++it) {
    std::copy_n(y.begin(), 8, p.begin());
    const Kernel<LD> s = kernel(p, m, eps);
    if (s.Q == 0 && s.Hm1 == 0) break;
    const LD X1 = 1 + p[0], X2 = p[1], X3 = p[2], Z1 = p[3], Z2 = p[4], Z3 = p[5];
    const std::array<LD, 8> gq = {2 * X1,
                                  4 * X2,
                                  8 * mm * X3,
                                  -2 * Z2 - 4 * mm * Z3,
                                  8 - 2 * Z1,
                                  -4 * mm * Z1 - 8 * mm,
                                  4 * mm * (4 * mm + 8),
                                  (LD)(4 * m + 2) * eps / 2};
    const std::array<LD, 8> gh = {1, 2, 4 * mm, 0, 0, 0, 0, 0};
    std::array<LD, 8> w;
    for (int i = 0; i < 8; ++i) w[i] = i < 3 ? (i > 0 && p[i] == 0 ? 0 : 1) : p[i] * p[i];
    LD a = 0, b = 0, c = 0;
    for (int i = 0; i < 8; ++i) {
      a += w[i] * gq[i] * gq[i];
      b += w[i] * gq[i] * gh[i];
      c += w[i] * gh[i] * gh[i];
    }
    const LD det = a * c - b * b;
    LD lq, lh;
    if (det > 1e-12L * a * c) {
      lq = (c * s.Q - b * s.Hm1) / det;
      lh = (a * s.Hm1 - b * s.Q) / det;
    } else {
      // gradients (nearly) parallel, only H can be fixed independently
      lq = 0;
      lh = s.Hm1 / c;
    }
    for (int i = 0; i < 8; ++i) y[i] -= w[i] * (lq * gq[i] + lh * gh[i]);
  }
  return before;
}

double sup(const PhasePoint& p) {
  double s = 0;
  for (double x : p) s = std::max(s, std::fabs(x));
  return s;
}

}  // namespace

Trajectory integrate(const Seed& seed, const ModelParams& mp, const IntegratorConfig& cfg,
                     const std::vector<Watcher>& watchers, const std::vector<Target>& targets_in) {
  if (!(cfg.rtol > 0) || !(cfg.atol > 0)) throw std::invalid_argument("rtol and atol must be positive");
  if (!(cfg.eta_max > seed.eta0)) throw std::invalid_argument("eta_max must exceed the seeding depth");

  std::vector<Target> targets = targets_in;
  if (targets.empty()) {
    for (const auto& c : critical_point_catalog(mp))
      if (c.id != "p0") targets.push_back({c.id, c.point, c.family});
  }

  Trajectory tr;
  tr.mp = mp;
  tr.einstein = seed.einstein;

  const Rhs rhs{mp.m, mp.epsilon};
  State y{};
  std::copy(seed.y.begin(), seed.y.end(), y.begin());
  y[8] = seed.ln_wt;
  y[9] = seed.t;
  y[10] = 0;
  LD eta = seed.eta0;
  State k0;
  rhs(y, k0);
  tr.samples.push_back(make_sample((double)eta, y, mp));

  std::vector<double> prev(watchers.size());
  std::vector<bool> active(watchers.size(), true);
  for (std::size_t i = 0; i < watchers.size(); ++i) prev[i] = watchers[i].fn(to_point(y));

  std::vector<int> conv(targets.size(), 0);
  LD stop_at = std::numeric_limits<LD>::infinity();
  bool stopped_by_event = false;
  LD h = 1e-2;
  const LD rtol = cfg.rtol, atol = cfg.atol;

  State out, err;
  for (;;) {
    const LD end = std::min<LD>(cfg.eta_max, stop_at);
    if (eta >= end - 1e-12L) {
      tr.status = stopped_by_event ? Status::StoppedByEvent : Status::ReachedHorizon;
      break;
    }
    if (tr.steps + tr.rejected >= cfg.max_steps) {
      tr.status = Status::NumericalFailure;
      tr.message = "step budget exhausted";
      break;
    }
    h = std::min<LD>({h, (LD)cfg.h_max, end - eta});

    Stepper::step(rhs, y, k0, h, out, err);
    LD en = 0;
    // f is driven by H-1, which is roundoff on Einstein runs; it rides along unchecked
    for (std::size_t i = 0; i < N - 1; ++i) {
      const LD sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(out[i]));
      en = std::max(en, std::fabs(err[i]) / sc);
    }
    if (!std::isfinite((double)en)) en = 1e10L;
    if (en > 1) {
      h *= std::max<LD>(0.1L, 0.9L * std::pow(en, -1.0L / 8));
      ++tr.rejected;
      if (h < 1e-14L * std::max<LD>(1, std::fabs(eta))) {
        tr.status = Status::NumericalFailure;
        tr.message = "step size underflow";
        break;
      }
      continue;
    }
    LD h_next = h * std::min<LD>(5, std::max<LD>(0.2L, 0.9L * std::pow(std::max(en, 1e-30L), -1.0L / 8)));

    // events: earliest crossing among active watchers
    const PhasePoint pn = to_point(out);
    int hit = -1;
    LD hit_frac = 2;
    for (std::size_t i = 0; i < watchers.size(); ++i) {
      if (!active[i]) continue;
      const double now = watchers[i].fn(pn);
      if (!std::isfinite(now)) {
        tr.status = Status::NumericalFailure;
        tr.message = "watcher " + watchers[i].name + " is not finite";
        return tr;
      }
      if (!crossed(prev[i], now, watchers[i].direction)) continue;
      LD lo = 0, hi = 1;
      State mid, e2;
      while ((hi - lo) * h > cfg.event_tol) {
        const LD c = (lo + hi) / 2;
        Stepper::step(rhs, y, k0, c * h, mid, e2);
        const double v = watchers[i].fn(to_point(mid));
        if (crossed(prev[i], v, watchers[i].direction)) hi = c;
        else lo = c;
      }
      if (hi < hit_frac) {
        hit_frac = hi;
        hit = (int)i;
      }
    }
    if (hit >= 0) {
      if (hit_frac < 1) {
        Stepper::step(rhs, y, k0, hit_frac * h, out, err);
        h_next = h;
      }
      h *= hit_frac;
      const Watcher& w = watchers[hit];
      tr.events.push_back({(double)(eta + h), w.name, hit, w.terminal});
      for (std::size_t i = 0; i < watchers.size(); ++i)
        if ((int)i == hit || (w.group >= 0 && watchers[i].group == w.group)) active[i] = false;
      if (w.terminal && !stopped_by_event) {
        stopped_by_event = true;
        stop_at = eta + h + cfg.grace;
      }
    }

    eta += h;
    y = out;
    ++tr.steps;
    if (cfg.renormalize_z4) y[iZ4] = std::copysign(std::sqrt(std::max<LD>(0, y[iZ2] * y[iZ3])), y[iZ4]);
    if (tr.einstein && cfg.project_einstein)
      tr.max_step_drift = std::max(tr.max_step_drift, (double)project_einstein(y, mp.m, mp.epsilon));
    rhs(y, k0);
    tr.samples.push_back(make_sample((double)eta, y, mp));
    const PhasePoint p = to_point(y);
    for (std::size_t i = 0; i < watchers.size(); ++i)
      if (active[i]) prev[i] = watchers[i].fn(p);

    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) finite = finite && std::isfinite((double)y[i]);
    if (!finite) {
      tr.status = Status::NumericalFailure;
      tr.message = "non-finite state";
      break;
    }
    const double norm = sup(p);
    if (norm > cfg.blowup_norm) {
      tr.status = Status::Escaped;
      tr.message = "state norm exceeded " + std::to_string(cfg.blowup_norm);
      break;
    }
    {
      const double s1 = std::max(1.0, norm), tol = 10 * cfg.constraint_tol;
      const Sample& s = tr.samples.back();
      std::string bad;
      if (s.d.Q > tol * s1 * s1) bad = "Q > 0";
      else if (s.d.Hm1 > tol * s1) bad = "H > 1";
      else if (p[iW] < -tol * s1) bad = "W < 0";
      else if (std::min({p[iZ1], p[iZ2], p[iZ3], p[iZ4]}) < -tol * s1) bad = "Z < 0";
      else if (std::fabs(constraint_residual(p)) > tol * s1 * s1) bad = "Z4^2 != Z2 Z3";
      if (!bad.empty()) {
        tr.status = Status::LeftRS;
        tr.message = "left RS: " + bad;
        break;
      }
    }

    double speed = 0;
    for (int i = 0; i < 8; ++i) speed = std::max(speed, (double)std::fabs(k0[i]));
    bool done = false;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      double dist = 0;
      for (int i = 0; i < 8; ++i) {
        if (i == iZ1 && targets[j].free_z1) continue;
        dist = std::max(dist, std::fabs(p[i] - targets[j].point[i]));
      }
      if (dist <= cfg.conv_dist && speed <= cfg.conv_speed) {
        if (++conv[j] >= cfg.conv_steps) {
          if (tr.converged_to.empty()) tr.converged_to = targets[j].id;
          if (cfg.stop_on_convergence && !stopped_by_event) done = true;
        }
      } else {
        conv[j] = 0;
      }
    }
    if (done) {
      tr.status = Status::ConvergedToCriticalPoint;
      break;
    }
    h = h_next;
  }
  return tr;
}

Trajectory integrate(const PhasePoint& p, double eta0, const ModelParams& mp, const IntegratorConfig& cfg,
                     const std::vector<Watcher>& watchers, const std::vector<Target>& targets) {
  Seed s;
  const auto y = to_shifted(p);
  for (int i = 0; i < 8; ++i) s.y[i] = y[i];
  s.y[0] = (long double)p[0] - 1;
  s.eta0 = eta0;
  const long double wt = p[iW] > 0 ? (long double)p[iW] : 1.0L;
  s.ln_wt = std::log(wt);
  s.t = p[iZ2] > 0 ? std::sqrt(p[iZ1] * wt / p[iZ2]) / mp.k : 0;
  const DerivedScalars d = derived_scalars(p, mp);
  s.einstein = d.Q == 0 && d.Hm1 == 0;
  return integrate(s, mp, cfg, watchers, targets);
}

DriftReport monitor_drift(const Trajectory& tr) {
  DriftReport r;
  r.einstein = tr.einstein;
  double end = std::numeric_limits<double>::infinity();
  for (const auto& e : tr.events) {
    if (e.terminal) {
      end = e.eta;
      break;
    }
  }
  r.max_einstein = tr.einstein ? tr.max_step_drift : std::nan("");
  for (const auto& s : tr.samples) {
    const PhasePoint p = s.p();
    r.max_abs_w = std::max(r.max_abs_w, std::fabs(p[iW]));
    if (s.eta > end) continue;
    r.max_constraint = std::max(r.max_constraint, std::fabs(constraint_residual(p)));
    r.max_qflow = std::max(r.max_qflow, std::fabs(q_flow_consistency(p, tr.mp)));
    if (tr.einstein) r.max_einstein = std::max({r.max_einstein, std::fabs(s.d.Q), std::fabs(s.d.Hm1)});
  }
  return r;
}

}  // namespace cohom1
