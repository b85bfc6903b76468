#include "cohom1/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cohom1/rkf78.hpp"

namespace cohom1 {

std::vector<CatalogEntry> critical_point_catalog(const ModelParams& mp, double z1) {
  const double m = mp.m, n = mp.n();
  std::vector<CatalogEntry> c;
  c.push_back({"p0", {1, 0, 0, 0, 0, 0, 0, 0}, false});
  const double x = 1 / n;
  c.push_back({"p1", {x, x, x, 1, x * x, x * x, x * x, 0}, false});
  const double zss = (n - 1) / (n * n * (2 * (2 * m + 3) * (2 * m + 3) + 4 * m));
  c.push_back({"p2", {x, x, x, 1, (2 * m + 3) * (2 * m + 3) * zss, zss, (2 * m + 3) * zss, 0}, false});
  const double y = 1 / (n - 1);
  const double z = (n - 2) / ((n - 1) * (n - 1) * (n + 1));
  c.push_back({"q1", {0, y, y, 0, z, z, z, 0}, false});
  const double zs = (n - 2) / ((n - 1) * (n - 1) * 4 * (m * m + 3 * m + 1));
  c.push_back({"q2", {0, y, y, 0, (m + 1) * (m + 1) * zs, zs, (m + 1) * zs, 0}, false});
  c.push_back({"p1_m0", {1.0 / 3, 1.0 / 3, 0, 1, 1.0 / 9, 0, 0, 0}, false});
  c.push_back({"q1_m0", {0, 0.5, 0, 0, 1.0 / 16, 0, 0, 0}, false});
  if (mp.epsilon == 1) c.push_back({"q0", {x, x, x, z1, 0, 0, 0, 2 / (n * mp.epsilon)}, true});
  c.push_back({"origin", {0, 0, 0, z1, 0, 0, 0, 0}, true});
  return c;
}

CatalogAudit catalog_audit(const ModelParams& mp) {
  CatalogAudit a;
  a.ok = true;
  for (double z1 : {0.0, 0.5, 1.0}) {
    for (const auto& e : critical_point_catalog(mp, z1)) {
      if (!e.family && z1 != 0.0) continue;
      CatalogRow r;
      r.id = e.id;
      r.z1 = e.family ? z1 : e.point[iZ1];
      r.point = e.point;
      const PhasePoint v = vector_field(e.point, mp);
      for (double x : v) r.v_norm = std::max(r.v_norm, std::fabs(x));
      const DerivedScalars d = derived_scalars(e.point, mp);
      r.Q = d.Q;
      r.Hm1 = d.Hm1;
      r.residual = constraint_residual(e.point);
      const double q_expect = e.id == "origin" ? -1.0 : 0.0;
      const double h_expect = e.id == "origin" ? -1.0 : 0.0;
      r.ok = r.v_norm < 1e-12 && std::fabs(r.Q - q_expect) < 1e-12 && std::fabs(r.Hm1 - h_expect) < 1e-12 &&
             std::fabs(r.residual) < 1e-12;
      a.ok = a.ok && r.ok;
      a.rows.push_back(r);
    }
  }
  return a;
}

std::string to_string(Label l) {
  switch (l) {
    case Label::AC: return "AC";
    case Label::ALC: return "ALC";
    case Label::AP: return "AP";
    case Label::ACP: return "ACP";
    case Label::AH: return "AH";
    case Label::Incomplete: return "Incomplete";
    case Label::Undetermined: return "Undetermined";
  }
  return "?";
}

std::string to_string(BaseLabel b) {
  switch (b) {
    case BaseLabel::FubiniStudy: return "FubiniStudy";
    case BaseLabel::NonKahlerCP: return "NonKahlerCP";
    case BaseLabel::StandardSphere: return "StandardSphere";
    case BaseLabel::JensenSphere: return "JensenSphere";
    case BaseLabel::NA: return "NA";
  }
  return "?";
}

namespace {

double sup_dist(const PhasePoint& p, const CatalogEntry& e) {
  double d = 0;
  for (int i = 0; i < 8; ++i) {
    if (i == iZ1 && e.family) continue;
    d = std::max(d, std::fabs(p[i] - e.point[i]));
  }
  return d;
}

}  // namespace

Classification classify(const Trajectory& tr, const ModelParams& mp, const ShootParams& sp, double tol,
                        double band) {
  Classification c;
  if (tr.samples.empty()) {
    c.note = "empty trajectory";
    return c;
  }
  const Transition t = watch_transitions(tr, mp, band);
  c.outcome = t.outcome;
  c.eta_exit = t.eta_exit.value_or(std::nan(""));
  c.ambiguous = t.ambiguous;

  // limits from the last accepted samples
  const std::size_t n = tr.samples.size(), k = std::min<std::size_t>(10, n);
  double mu = 0, nu = 0, nu_lo = INFINITY, nu_hi = -INFINITY;
  bool nu_ok = true;
  for (std::size_t i = n - k; i < n; ++i) {
    const PhasePoint p = tr.samples[i].p();
    mu += p[iZ1];
    if (p[iZ2] > 0 && p[iZ3] >= 0) {
      const double r = std::sqrt(p[iZ3] / p[iZ2]);
      nu += r;
      nu_lo = std::min(nu_lo, r);
      nu_hi = std::max(nu_hi, r);
    } else {
      nu_ok = false;
    }
  }
  c.mu2 = mu / k;
  c.nu2 = nu_ok ? nu / k : std::nan("");

  const PhasePoint last = tr.samples.back().p();
  if (!tr.converged_to.empty()) {
    c.limit_point = tr.converged_to;
  } else if (c.outcome != Outcome::EntersC) {
    double best = 1e-2;
    for (const auto& e : critical_point_catalog(mp, last[iZ1])) {
      if (e.id == "p0") continue;
      const double d = sup_dist(last, e);
      if (d < best) {
        best = d;
        c.limit_point = e.id;
      }
    }
  }

  // W identically zero: the expanding constant never enters, use the steady table
  bool expanding = mp.epsilon == 1;
  if (expanding) {
    bool w_zero = true;
    for (const auto& s : tr.samples) w_zero = w_zero && s.y[iW] == 0;
    if (w_zero) {
      expanding = false;
      c.note = "W vanishes identically; steady decision table used";
    }
  }

  if (tr.status == Status::NumericalFailure || tr.status == Status::LeftRS) {
    c.label = Label::Undetermined;
    c.note = "integration ended with " + to_string(tr.status) + ": " + tr.message;
  } else if (c.outcome == Outcome::EntersC) {
    c.label = Label::Incomplete;
  } else if (expanding) {
    c.label = sp.s4 > 0 ? Label::AC : Label::AH;
  } else if (sp.s4 > 0) {
    c.label = c.outcome == Outcome::EntersA ? Label::ACP : Label::AP;
  } else {
    c.label = c.outcome == Outcome::EntersA ? Label::ALC : Label::AC;
  }

  const bool cone_in_B = !expanding && c.outcome == Outcome::StaysInB &&
                         (c.label == Label::AP || c.label == Label::AC);
  if (cone_in_B && nu_ok && nu_hi - nu_lo > tol) {
    c.label = Label::Undetermined;
    c.note = "sqrt(Z3/Z2) still moving over the last samples";
  }

  const double pi = 3.14159265358979323846;
  if (c.label == Label::Incomplete || c.label == Label::Undetermined) {
    c.base = BaseLabel::NA;
  } else if (cone_in_B) {
    if (std::fabs(c.nu2 - 1) <= tol) c.base = BaseLabel::StandardSphere;
    else if (std::fabs(c.nu2 - 1.0 / (2 * mp.m + 3)) <= tol) c.base = BaseLabel::JensenSphere;
  } else if (sp.theta <= 1e-14) {
    c.base = BaseLabel::FubiniStudy;
  } else if (std::fabs(sp.theta - pi) > 1e-14) {
    c.base = BaseLabel::NonKahlerCP;
  }

  c.a_growth = std::nan("");
  if (c.label == Label::ACP) {
    const MetricProfile prof = reconstruct(tr, mp);
    const ProfileRow& e = prof.back();
    for (auto it = prof.rbegin(); it != prof.rend(); ++it) {
      if (it->t <= e.t / 10) {
        if (it->a > 0) c.a_growth = e.a / it->a;
        break;
      }
    }
  }
  if (c.note.empty()) c.note = t.note;
  return c;
}

MetricProfile reconstruct(const Trajectory& tr, const ModelParams& mp, double normalization) {
  if (!(normalization > 0)) throw DomainError("normalization must be positive");
  if (mp.epsilon == 1 && normalization != 1) throw std::invalid_argument("expanding runs fix the homothety");
  MetricProfile prof;
  prof.reserve(tr.samples.size());
  const double nan = std::nan("");
  for (const auto& s : tr.samples) {
    const PhasePoint p = s.p();
    const double lw = s.ln_wt + std::log(normalization);
    if (!std::isfinite(lw)) throw DomainError("W~ <= 0 on the trajectory");
    const double wt = std::exp(lw), sw = std::exp(lw / 2);
    ProfileRow r;
    r.eta = s.eta;
    r.t = s.t * std::sqrt(normalization);
    r.f = s.f;
    r.a = p[iZ2] > 0 ? std::sqrt(p[iZ1] * wt / p[iZ2]) : nan;
    r.b = p[iZ2] > 0 ? std::sqrt(wt / p[iZ2]) : nan;
    r.c = p[iZ4] > 0 ? std::sqrt(wt / p[iZ4]) : nan;
    r.adot = r.a * p[iX1] / sw;
    r.bdot = r.b * p[iX2] / sw;
    r.cdot = r.c * p[iX3] / sw;
    r.fdot = s.d.Hm1 / sw;
    prof.push_back(r);
  }
  return prof;
}

namespace {

struct TRhs {
  long double m, he;
  void operator()(const std::array<long double, 8>& s, std::array<long double, 8>& d) const {
    const long double a = s[0], ad = s[1], b = s[2], bd = s[3], c = s[4], cd = s[5], fd = s[7];
    const long double la = ad / a, lb = bd / b, lc = cd / c;
    const long double trL = la + 2 * lb + 4 * m * lc;
    const long double a2 = a * a, b2 = b * b, c2 = c * c, b4 = b2 * b2, c4 = c2 * c2;
    const long double ra = la * la - trL * la + 2 * a2 / b4 + 4 * m * a2 / c4 + la * fd + he;
    const long double rb = lb * lb - trL * lb + 4 / b2 - 2 * a2 / b4 + 4 * m * b2 / c4 + lb * fd + he;
    const long double rc =
        lc * lc - trL * lc + (4 * m + 8) / c2 - 2 * a2 / c4 - 4 * b2 / c4 + lc * fd + he;
    d[0] = ad;
    d[1] = a * ra;
    d[2] = bd;
    d[3] = b * rb;
    d[4] = cd;
    d[5] = c * rc;
    d[6] = fd;
    d[7] = -he + ra + 2 * rb + 4 * m * rc;
  }
};

}  // namespace

TState integrate_t_system(const ModelParams& mp, const TState& s0, double t0, double t1, double rtol) {
  using LD = long double;
  using S = std::array<LD, 8>;
  const TRhs rhs{(LD)mp.m, (LD)mp.epsilon / 2};
  S y, k0, out, err;
  for (int i = 0; i < 8; ++i) y[i] = s0[i];
  LD t = t0, h = std::max(1e-6, 1e-3 * std::fabs(t1 - t0));
  while (t < t1) {
    h = std::min<LD>(h, t1 - t);
    rhs(y, k0);
    Rkf78<LD, 8>::step(rhs, y, k0, h, out, err);
    LD en = 0;
    for (int i = 0; i < 8; ++i)
      en = std::max(en, std::fabs(err[i]) / (1e-20L + rtol * std::max(std::fabs(y[i]), std::fabs(out[i]))));
    if (!std::isfinite((double)en) || en > 1) {
      h *= 0.25L;
      if (h < 1e-15L * std::max<LD>(1, std::fabs(t))) throw DomainError("t-system step size underflow");
      continue;
    }
    t += h;
    y = out;
    h *= std::min<LD>(5, std::max<LD>(0.2L, 0.9L * std::pow(std::max(en, 1e-30L), -1.0L / 8)));
  }
  TState r;
  for (int i = 0; i < 8; ++i) r[i] = (double)y[i];
  return r;
}

CrossCheck cross_check_t_system(const Trajectory& tr, const ModelParams& mp, double window) {
  const MetricProfile prof = reconstruct(tr, mp);
  double end = std::numeric_limits<double>::infinity();
  for (const auto& e : tr.events)
    if (e.terminal) end = std::min(end, e.eta);
  std::size_t usable = 0;
  while (usable < prof.size() && prof[usable].eta <= end) ++usable;
  if (usable < 8) throw DomainError("trajectory too short for the t-system cross-check");
  const std::size_t i0 = usable / 2;
  const ProfileRow& r0 = prof[i0];
  for (double v : {r0.a, r0.b, r0.c})
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("metric component undefined at the check point");

  CrossCheck cc;
  cc.t_start = r0.t;
  TState s{r0.a, r0.adot, r0.b, r0.bdot, r0.c, r0.cdot, r0.f, r0.fdot};
  double t = r0.t;
  for (std::size_t j = i0 + 1; j < usable; ++j) {
    const ProfileRow& r = prof[j];
    if (r.t > r0.t + window && cc.rows >= 3) break;
    s = integrate_t_system(mp, s, t, r.t);
    t = r.t;
    cc.t_end = t;
    ++cc.rows;
    cc.max_rel_dev = std::max({cc.max_rel_dev, std::fabs(s[0] / r.a - 1), std::fabs(s[2] / r.b - 1),
                               std::fabs(s[4] / r.c - 1)});
  }
  return cc;
}

}  // namespace cohom1
