#include "cohom1/phase.hpp"

#include <algorithm>
#include <cmath>

namespace cohom1 {

ModelParams make_model(int m, int k, int epsilon) {
  if (m < 0) throw std::invalid_argument("m must be >= 0, got " + std::to_string(m));
  if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
  if (epsilon != 0 && epsilon != 1)
    throw std::invalid_argument("epsilon must be 0 or 1, got " + std::to_string(epsilon));
  ModelParams mp;
  mp.m = m;
  mp.k = k;
  mp.epsilon = epsilon;
  return mp;
}

DerivedScalars derived_scalars_shifted(const std::array<double, 8>& y, const ModelParams& mp) {
  const Kernel<double> s = kernel(y, mp.m, mp.epsilon);
  DerivedScalars d;
  d.Gm1 = s.Gm1;
  d.Hm1 = s.Hm1;
  d.G = 1.0 + s.Gm1;
  d.H = 1.0 + s.Hm1;
  d.Q = s.Q;
  d.R1 = s.R1;
  d.R2 = s.R2;
  d.R3 = s.R3;
  d.Rs = s.Rs;
  return d;
}

DerivedScalars derived_scalars(const PhasePoint& p, const ModelParams& mp) {
  return derived_scalars_shifted(to_shifted(p), mp);
}

PhasePoint vector_field(const PhasePoint& p, const ModelParams& mp) {
  std::array<double, 8> v{};
  field(to_shifted(p), mp.m, mp.epsilon, v);
  return v;
}

double constraint_residual(const PhasePoint& p) { return p[iZ4] * p[iZ4] - p[iZ2] * p[iZ3]; }

double constraint_residual_derivative(const PhasePoint& p, const ModelParams& mp) {
  const PhasePoint v = vector_field(p, mp);
  return 2 * p[iZ4] * v[iZ4] - p[iZ3] * v[iZ2] - p[iZ2] * v[iZ3];
}

std::array<double, 8> grad_Q(const PhasePoint& p, const ModelParams& mp) {
  const double m = mp.m;
  return {2 * p[iX1],
          4 * p[iX2],
          8 * m * p[iX3],
          -2 * p[iZ2] - 4 * m * p[iZ3],
          8 - 2 * p[iZ1],
          -8 * m - 4 * m * p[iZ1],
          4 * m * (4 * m + 8),
          (mp.n() - 1) * mp.epsilon / 2.0};
}

std::array<double, 8> grad_H(const ModelParams& mp) {
  return {1, 2, 4.0 * mp.m, 0, 0, 0, 0, 0};
}

namespace {
double dot(const std::array<double, 8>& a, const std::array<double, 8>& b) {
  double s = 0;
  for (int i = 0; i < 8; ++i) s += a[i] * b[i];
  return s;
}
}  // namespace

double q_flow_consistency(const PhasePoint& p, const ModelParams& mp) {
  // long double: the terms reach a few hundred for m = 3
  using LD = long double;
  std::array<LD, 8> y, v;
  for (int i = 0; i < 8; ++i) y[i] = p[i];
  y[0] = (LD)p[0] - 1;
  const Kernel<LD> s = kernel(y, mp.m, mp.epsilon);
  field(y, mp.m, mp.epsilon, v);
  const LD m = mp.m, X1 = p[iX1], W = p[iW], eps = mp.epsilon;
  const std::array<LD, 8> gq = {2 * X1,         4 * y[1], 8 * m * y[2], -2 * y[4] - 4 * m * y[5], 8 - 2 * y[3],
                                -8 * m - 4 * m * y[3], 4 * m * (4 * m + 8), (LD)(mp.n() - 1) * eps / 2};
  LD lhs = 0;
  for (int i = 0; i < 8; ++i) lhs += gq[i] * v[i];
  const LD rhs = 2 * s.Q * s.g + eps * s.Hm1 * W;
  return (double)(lhs - rhs);
}

double h_flow_consistency(const PhasePoint& p, const ModelParams& mp) {
  const DerivedScalars d = derived_scalars(p, mp);
  const double g = d.G - mp.epsilon * p[iW] / 2;
  const double rhs = d.Hm1 * (g - 1) + d.Q;
  return dot(grad_H(mp), vector_field(p, mp)) - rhs;
}

SubsetFlags subset_membership(const PhasePoint& p, const ModelParams& mp, double tol) {
  if (!(tol >= 0)) throw std::invalid_argument("tol must be >= 0");
  const DerivedScalars d = derived_scalars(p, mp);
  auto zero = [tol](double x) { return std::fabs(x) <= tol; };
  auto nonneg = [tol](double x) { return x >= -tol; };

  SubsetFlags f;
  f.rs = nonneg(-d.Q) && nonneg(-d.Hm1) && nonneg(p[iW]) && nonneg(p[iZ1]) && nonneg(p[iZ2]) &&
         nonneg(p[iZ3]) && nonneg(p[iZ4]) && zero(constraint_residual(p));
  f.einstein = f.rs && zero(d.Q) && zero(d.Hm1);
  f.steady = f.rs && zero(p[iW]);
  f.ricci_flat = f.steady && f.einstein;
  // X2 = X3 (the defining list prints X3 - X3)
  f.fubini_study = f.rs && zero(p[iZ2] - p[iZ3]) && zero(p[iX2] - p[iX3]);
  f.kahler_einstein =
      f.fubini_study && zero(p[iX2] * p[iX2] - p[iZ1] * p[iZ2]) &&
      zero((4.0 * mp.m + 4) * p[iZ2] + mp.epsilon * p[iW] / 2 - p[iX2] * (1 + p[iX1]));
  f.round = f.rs && zero(p[iZ1] - 1) && zero(p[iX1] - p[iX2]);
  f.m0 = f.steady && zero(p[iX3]) && zero(p[iZ3]);
  return f;
}

double barrier_F(double l, const PhasePoint& p) {
  if (!(p[iZ1] > 0)) throw DomainError("F_l undefined for Z1 <= 0");
  const double z2 = std::max(p[iZ2], 0.0);
  return p[iX2] - p[iX1] + l * (std::sqrt(z2 / p[iZ1]) - std::sqrt(p[iZ1] * z2));
}

double barrier_F_derivative(double l, const PhasePoint& p, const ModelParams& mp) {
  const double F = barrier_F(l, p);
  const DerivedScalars d = derived_scalars(p, mp);
  const double Z1 = p[iZ1], Z2 = std::max(p[iZ2], 0.0), Z3 = p[iZ3];
  const double g = d.G - mp.epsilon * p[iW] / 2;
  return F * (g - 1 + 2 * l * std::sqrt(Z1 * Z2)) +
         (l * std::sqrt(Z2 / Z1) * (1 - p[iX1]) + (4 - 2 * l * l) * Z2 + 4.0 * mp.m * Z3) * (1 - Z1);
}

double barrier_F_derivative_direct(double l, const PhasePoint& p, const ModelParams& mp) {
  if (!(p[iZ1] > 0) || !(p[iZ2] > 0)) throw DomainError("direct F_l derivative needs Z1, Z2 > 0");
  const PhasePoint v = vector_field(p, mp);
  const double Z1 = p[iZ1], Z2 = p[iZ2];
  const double a = std::sqrt(Z2 / Z1), b = std::sqrt(Z1 * Z2);
  // d sqrt(Z2/Z1) = a/2 (dZ2/Z2 - dZ1/Z1), d sqrt(Z1 Z2) = b/2 (dZ1/Z1 + dZ2/Z2)
  const double da = 0.5 * a * (v[iZ2] / Z2 - v[iZ1] / Z1);
  const double db = 0.5 * b * (v[iZ1] / Z1 + v[iZ2] / Z2);
  return v[iX2] - v[iX1] + l * (da - db);
}

}  // namespace cohom1
