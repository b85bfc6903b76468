#include "cohom1/seed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cohom1 {

namespace {

template <class T>
std::array<std::array<T, 8>, 6> basis(int m_, int eps_) {
  const T m = m_, eps = eps_;
  const T r2 = std::sqrt(T(2));
  std::array<std::array<T, 8>, 6> w{};
  w[0] = {-(4 * m + 2) * (2 * m + 2), 2 * m + 2, 2 * m + 2, 0, 1, 1, 1, 0};
  w[1] = {-4, 2, 0, 0, 1, 0, 0, 0};
  w[2] = {-4 * (m + 1) * (m + 1) * r2, 2 * r2, (m + 2) * r2, 0, r2, 0, r2 / 2, 0};
  w[3] = {-1, 0, 0, 0, 0, 0, 0, 0};
  w[4] = {-(4 * m + 2) * eps / 2, eps / 2, eps / 2, 0, 0, 0, 0, 2};
  w[5] = {0, 0, 0, 1, 0, 0, 0, 0};
  return w;
}

void check_shoot(const ShootParams& sp) {
  if (!(sp.theta >= 0 && sp.theta <= std::numbers::pi + 1e-14))
    throw std::invalid_argument("theta must lie in [0, pi]");
  if (!(sp.s4 >= 0) || !std::isfinite(sp.s4)) throw std::invalid_argument("s4 must be finite and >= 0");
  if (!(sp.s5 >= 0) || !std::isfinite(sp.s5)) throw std::invalid_argument("s5 must be finite and >= 0");
}

long double sup_norm(const std::array<long double, 8>& v) {
  long double s = 0;
  for (auto x : v) s = std::max(s, std::fabs(x));
  return s;
}

}  // namespace

EigenBasis eigen_basis(const ModelParams& mp) {
  const auto w = basis<double>(mp.m, mp.epsilon);
  EigenBasis b;
  for (int i = 0; i < 6; ++i) b.w[i] = w[i];
  return b;
}

Matrix8 jacobian_at_p0(const ModelParams& mp) {
  const double m = mp.m, he = mp.epsilon / 2.0;
  Matrix8 J{};
  J[0][0] = 2;
  J[1][iZ2] = 4;
  J[1][iZ3] = 4 * m;
  J[1][iW] = he;
  J[2][iZ3] = -4;
  J[2][iZ4] = 4 * m + 8;
  J[2][iW] = he;
  for (int i = iZ1; i <= iW; ++i) J[i][i] = 2;
  return J;
}

std::array<PhasePoint, 2> center_functionals(const ModelParams& mp) {
  const double m = mp.m, qe = mp.epsilon / 4.0;
  PhasePoint B{0, 1, 0, 0, -2, -2 * m, 0, -qe};
  PhasePoint C{0, 0, 1, 0, 0, 2, -(2 * m + 4), -qe};
  return {B, C};
}

ArcCoefficients arc_coefficients(int k, double theta) {
  constexpr long double pi = std::numbers::pi_v<long double>;
  ArcCoefficients a;
  long double th = theta;
  if (std::fabs(theta - std::numbers::pi) <= 1e-14) {
    a.s1 = 0;
    a.s2 = 1;
    a.s3 = 0;
  } else if (std::fabs(theta) <= 1e-14) {
    a.s1 = 1;
    a.s2 = 0;
    a.s3 = 0;
  } else {
    if (th > pi) th = pi;
    const long double c = std::cos(th), s = std::sin(th);
    a.s1 = (1 + c) / 2;
    a.s2 = (1 - c) / 2;
    a.s3 = s / std::sqrt(2.0L);
  }
  a.s6 = (long double)k * k * (a.s1 + a.s2 + std::sqrt(2.0L) * a.s3);
  return a;
}

std::array<long double, 8> seed_direction(const ModelParams& mp, const ShootParams& sp) {
  check_shoot(sp);
  const auto w = basis<long double>(mp.m, mp.epsilon);
  const ArcCoefficients a = arc_coefficients(mp.k, sp.theta);
  const long double c[6] = {a.s1, a.s2, a.s3, (long double)sp.s4, (long double)sp.s5, a.s6};
  std::array<long double, 8> d{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 8; ++j) d[j] += c[i] * w[i][j];
  return d;
}

double default_eta0(const ModelParams& mp, const ShootParams& sp, double scale) {
  return 0.5 * std::log(scale / (double)sup_norm(seed_direction(mp, sp)));
}

Seed make_seed(const ModelParams& mp, const ShootParams& sp, double scale) {
  const auto d = seed_direction(mp, sp);
  Seed s;
  s.eta0 = std::isnan(sp.eta0) ? default_eta0(mp, sp, scale) : sp.eta0;
  const long double u = std::exp(2.0L * s.eta0);
  s.u = (double)u;
  if (u * sup_norm(d) > 1e-4L) throw DomainError("seeding depth too shallow: e^{2 eta0} |w| > 1e-4");
  for (int j = 0; j < 8; ++j) s.y[j] = u * d[j];
  s.y[iZ4] = std::sqrt(s.y[iZ2] * s.y[iZ3]);

  s.einstein = sp.s4 == 0;
  if (s.einstein) {
    const long double m = mp.m;
    for (int it = 0; it < 8; ++it) {
      s.y[0] = -2 * s.y[1] - 4 * m * s.y[2];
      const long double q = kernel(s.y, mp.m, mp.epsilon).Q;
      const long double dq = (2 + 2 * s.y[0]) * (-2) + 4 * s.y[1];
      s.y[1] -= q / dq;
    }
    s.y[0] = -2 * s.y[1] - 4 * m * s.y[2];
  }

  // W~ gauge: W itself when it is nonzero in the expanding case, else u s6
  const ArcCoefficients a = arc_coefficients(mp.k, sp.theta);
  const long double wt = (mp.epsilon == 1 && s.y[iW] > 0) ? s.y[iW] : u * a.s6;
  s.ln_wt = std::log(wt);
  const long double asq = s.y[iZ1] * wt / s.y[iZ2];
  s.t = std::sqrt(asq) / mp.k;
  return s;
}

PhasePoint build_seed(const ModelParams& mp, const ShootParams& sp) {
  const auto d = seed_direction(mp, sp);
  const double eta0 = std::isnan(sp.eta0) ? default_eta0(mp, sp, 1e-6) : sp.eta0;
  const long double u = std::exp(2.0L * eta0);
  if (u * sup_norm(d) > 1e-4L) throw DomainError("seeding depth too shallow: e^{2 eta0} |w| > 1e-4");
  PhasePoint p{};
  for (int j = 0; j < 8; ++j) p[j] = (double)(u * d[j]);
  p[0] = (double)(1 + u * d[0]);
  return p;
}

SeedReport validate_seed(const PhasePoint& p, const ModelParams& mp, const ShootParams& sp) {
  const auto d = seed_direction(mp, sp);
  const double eta0 = std::isnan(sp.eta0) ? default_eta0(mp, sp, 1e-6) : sp.eta0;
  SeedReport r;
  r.u = std::exp(2.0 * eta0);
  const DerivedScalars ds = derived_scalars(p, mp);
  r.q_over_u = ds.Q / r.u;
  r.one_minus_h_over_u = -ds.Hm1 / r.u;

  // exact first-order coefficients from the gradients at p0
  PhasePoint p0{1, 0, 0, 0, 0, 0, 0, 0};
  const auto gq = grad_Q(p0, mp);
  const auto gh = grad_H(mp);
  long double ql = 0, hl = 0;
  for (int j = 0; j < 8; ++j) {
    ql += gq[j] * d[j];
    hl += gh[j] * d[j];
  }
  r.q_linear = (double)ql;
  r.one_minus_h_linear = (double)-hl;

  r.sqrt_z1_over_z2 = p[iZ2] > 0 ? std::sqrt(p[iZ1] / p[iZ2]) : std::nan("");
  r.residual = constraint_residual(p);

  const double wn = std::max(1.0, (double)sup_norm(d));
  r.bound = 50.0 * wn * wn * r.u;
  r.q_defect = std::fabs(r.q_over_u + 2 * sp.s4);
  r.h_defect = std::fabs(r.one_minus_h_over_u - sp.s4);
  r.k_defect = std::fabs(r.sqrt_z1_over_z2 - mp.k);
  r.ok = r.q_defect <= r.bound && r.h_defect <= r.bound && r.k_defect <= r.bound &&
         std::fabs(r.residual) <= r.bound * r.u;
  return r;
}

}  // namespace cohom1
