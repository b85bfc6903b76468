#include "cohom1/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace cohom1 {

double face_function(const PhasePoint& p) {
  return 2 * (std::sqrt(std::max(p[iZ2], 0.0)) - std::sqrt(std::max(p[iZ3], 0.0))) + p[iX3] - p[iX2];
}

double k_factor(const PhasePoint& p, const ModelParams& mp) {
  const double r2 = std::sqrt(std::max(p[iZ2], 0.0)), r3 = std::sqrt(std::max(p[iZ3], 0.0));
  return 1 + (4.0 * mp.m - 4) * r3 - 4 * r2 + 2 * p[iZ1] * (r2 + r3);
}

RegionState region_of(const PhasePoint& p, const ModelParams& mp, double tol) {
  RegionState r;
  const bool rs = subset_membership(p, mp, tol).rs;
  const double z1 = 1 - p[iZ1];
  const double x = p[iX1] - p[iX2];
  const bool common = rs && z1 >= -tol && p[iZ2] - p[iZ3] >= -tol && face_function(p) >= -tol &&
                      std::min({p[iX1], p[iX2], p[iX3]}) >= -tol;
  r.in_A = common && x <= tol;
  r.in_B = common && x >= -tol;
  r.in_C = rs && z1 <= tol && x >= -tol;
  if (p[iZ1] > 0) {
    r.in_F = common && barrier_F(2, p) >= -tol;
  } else {
    r.diagnostic = "F undefined for Z1 <= 0";
  }
  if (r.in_B) {
    if (std::fabs(z1) <= tol && x > tol) r.exit_kind = ExitKind::ViaZ1;
    else if (std::fabs(x) <= tol && z1 > tol) r.exit_kind = ExitKind::ViaX;
  }
  return r;
}

std::vector<Watcher> region_watchers(double band) {
  Watcher a;
  a.name = "enter_A";
  a.fn = [band](const PhasePoint& p) { return p[iX1] - p[iX2] + band; };
  a.direction = -1;
  a.group = 0;
  Watcher c;
  c.name = "enter_C";
  c.fn = [band](const PhasePoint& p) { return 1 + band - p[iZ1]; };
  c.direction = -1;
  c.terminal = true;
  c.group = 0;
  return {a, c};
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::EntersA: return "EntersA";
    case Outcome::EntersC: return "EntersC";
    case Outcome::StaysInB: return "StaysInB";
  }
  return "?";
}

Transition watch_transitions(const Trajectory& tr, const ModelParams& mp, double band) {
  (void)mp;
  Transition t;
  for (const auto& e : tr.events) {
    if (e.name != "enter_A" && e.name != "enter_C") continue;
    t.outcome = e.name == "enter_A" ? Outcome::EntersA : Outcome::EntersC;
    t.eta_exit = e.eta;
    for (const auto& s : tr.samples) {
      if (s.eta < e.eta) continue;
      const PhasePoint p = s.p();
      t.ambiguous = std::fabs(p[iX1] - p[iX2]) <= 2 * band && std::fabs(1 - p[iZ1]) <= 2 * band;
      break;
    }
    if (t.ambiguous) t.note = "1 - Z1 and X1 - X2 both vanish within the band at the exit";
    return t;
  }
  t.outcome = Outcome::StaysInB;
  if (tr.status == Status::ConvergedToCriticalPoint) t.note = "converged to " + tr.converged_to;
  else t.note = "stays in B up to eta = " + (tr.samples.empty() ? std::string("?") : std::to_string(tr.samples.back().eta));
  return t;
}

WitnessReport monotone_witnesses(const Trajectory& tr, const ModelParams& mp, double s4, double band) {
  WitnessReport w;
  const Transition tt = watch_transitions(tr, mp, band);
  const double end = tt.eta_exit.value_or(std::numeric_limits<double>::infinity());
  w.h_applicable = w.z1_applicable = s4 > 0;
  w.z_applicable = tr.einstein && mp.epsilon == 0;
  if (tr.einstein && !w.h_applicable) w.diagnostics.push_back("Q vanishes identically: witnesses 1 and 2 skipped");

  double prev_h = std::nan(""), prev_z1 = std::nan(""), prev_z = std::nan("");
  long skipped = 0;
  for (const auto& s : tr.samples) {
    if (s.eta >= end) break;
    ++w.samples_used;
    const PhasePoint p = s.p();
    if (w.h_applicable) {
      if (s.d.Q < 0) {
        const double r = std::sqrt(-s.d.Q);
        const double h = s.d.Hm1 / r;
        const double z1 = std::sqrt(p[iZ1]) * (p[iX1] - p[iX2]) / r;
        if (!std::isnan(prev_h)) {
          w.h_violation = std::max(w.h_violation, h - prev_h);
          w.z1_violation = std::max(w.z1_violation, z1 - prev_z1);
        }
        prev_h = h;
        prev_z1 = z1;
      } else {
        ++skipped;
      }
    }
    if (w.z_applicable && p[iZ1] > 0 && p[iZ2] > 0 && (mp.m == 0 || p[iZ3] > 0)) {
      const double lz = (2 * mp.m + 3) * std::log(p[iZ2]) + (mp.m > 0 ? 2 * mp.m * std::log(p[iZ3]) : 0.0) -
                        std::log(p[iZ1]);
      if (!std::isnan(prev_z)) w.z_violation = std::max(w.z_violation, -std::expm1(lz - prev_z));
      prev_z = lz;
    }
  }
  if (skipped > 0) w.diagnostics.push_back(std::to_string(skipped) + " samples with Q >= 0 skipped");
  return w;
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  const ModelParams& mp;

  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
  double logz() { return std::pow(10.0, -4.0 + 4.0 * unit()); }

  PhasePoint base() {
    PhasePoint p{};
    p[iX1] = unit();
    p[iX2] = unit();
    p[iX3] = unit();
    p[iZ1] = logz();
    p[iZ2] = logz();
    p[iZ3] = logz();
    if (p[iZ3] > p[iZ2]) std::swap(p[iZ2], p[iZ3]);
    p[iZ4] = std::sqrt(p[iZ2] * p[iZ3]);
    p[iW] = mp.epsilon == 1 ? logz() : 0.0;
    return p;
  }
};

bool in_rs(const PhasePoint& p, const ModelParams& mp) {
  const DerivedScalars d = derived_scalars(p, mp);
  return d.Q <= 0 && d.Hm1 <= 0;
}

bool in_F_face(const PhasePoint& p, const ModelParams& mp) {
  return in_rs(p, mp) && p[iZ1] <= 1 && p[iZ2] >= p[iZ3] && face_function(p) >= 0 &&
         std::min({p[iX1], p[iX2], p[iX3]}) >= 0 && barrier_F(2, p) >= 0;
}

template <class Gen, class Val>
StratumResult run_stratum(const std::string& name, bool gating, long n, Sampler& s, Gen gen, Val val) {
  StratumResult r;
  r.name = name;
  r.gating = gating;
  r.min_value = std::numeric_limits<double>::infinity();
  const long cap = 5000 * n;
  while (r.accepted < n && r.attempts < cap) {
    ++r.attempts;
    PhasePoint p;
    if (!gen(s, p)) continue;
    ++r.accepted;
    const double v = val(p);
    if (v < r.min_value) {
      r.min_value = v;
      r.argmin = p;
    }
  }
  return r;
}

}  // namespace

AuditReport boundary_sign_audit(const ModelParams& mp, long n_samples, std::uint64_t rng_seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  Sampler s{std::mt19937_64(rng_seed), mp};
  AuditReport rep;

  // {F2 = 0} with Z1 <= 1, Z2 >= Z3, X1 >= 0: project X2
  rep.strata.push_back(run_stratum(
      "F2=0", true, n_samples, s,
      [&](Sampler& sm, PhasePoint& p) {
        p = sm.base();
        p[iX2] = p[iX1] - 2 * (std::sqrt(p[iZ2] / p[iZ1]) - std::sqrt(p[iZ1] * p[iZ2]));
        return in_rs(p, mp);
      },
      [&](const PhasePoint& p) { return barrier_F_derivative(2, p, mp); }));

  // {Z2 = Z3} face of F: inward derivative of Z2 - Z3
  rep.strata.push_back(run_stratum(
      "Z2=Z3", true, n_samples, s,
      [&](Sampler& sm, PhasePoint& p) {
        p = sm.base();
        p[iZ3] = p[iZ4] = p[iZ2];
        return in_F_face(p, mp);
      },
      [&](const PhasePoint& p) {
        const PhasePoint v = vector_field(p, mp);
        return v[iZ2] - v[iZ3];
      }));

  // {Z1 = 1} face of F: inward derivative of 1 - Z1
  rep.strata.push_back(run_stratum(
      "Z1=1", true, n_samples, s,
      [&](Sampler& sm, PhasePoint& p) {
        p = sm.base();
        p[iZ1] = 1;
        return in_F_face(p, mp);
      },
      [&](const PhasePoint& p) { return -vector_field(p, mp)[iZ1]; }));

  // K on the face 2(sqrt Z2 - sqrt Z3) + X3 - X2 = 0 within RS, Z1 <= 1, X3 >= 0, Z2 >= Z3
  rep.strata.push_back(run_stratum(
      "K:face", true, n_samples, s,
      [&](Sampler& sm, PhasePoint& p) {
        p = sm.base();
        p[iX2] = p[iX3] + 2 * (std::sqrt(p[iZ2]) - std::sqrt(p[iZ3]));
        return in_rs(p, mp);
      },
      [&](const PhasePoint& p) { return k_factor(p, mp); }));

  // K on RS, Z1 <= 1, X3 >= 0, Z2 >= Z3 without the face equation; reported only
  rep.strata.push_back(run_stratum(
      "K:open", false, n_samples, s,
      [&](Sampler& sm, PhasePoint& p) {
        p = sm.base();
        return in_rs(p, mp);
      },
      [&](const PhasePoint& p) { return k_factor(p, mp); }));

  rep.ok = true;
  for (const auto& st : rep.strata)
    if (st.gating) rep.ok = rep.ok && st.accepted == n_samples && st.min_value >= -1e-12;
  return rep;
}

}  // namespace cohom1
