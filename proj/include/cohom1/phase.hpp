#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace cohom1 {

// Phase point (X1,X2,X3,Z1,Z2,Z3,Z4,W).
using PhasePoint = std::array<double, 8>;

enum Coord { iX1 = 0, iX2, iX3, iZ1, iZ2, iZ3, iZ4, iW };

struct ModelParams {
  int m = 1;
  int k = 1;
  int epsilon = 0;

  int n() const { return 4 * m + 3; }
};

// throws std::invalid_argument on m < 0, k < 1, epsilon not in {0,1}
ModelParams make_model(int m, int k, int epsilon);

struct DerivedScalars {
  double G = 0, H = 0, Q = 0;
  double R1 = 0, R2 = 0, R3 = 0, Rs = 0;
  // G-1 and H-1 without cancellation (X1 close to 1 near the seed)
  double Gm1 = 0, Hm1 = 0;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Kernels on shifted coordinates y = p - p0, i.e. y[0] = X1 - 1 and the other
// entries unchanged. The integrator runs these in long double.

template <class T>
struct Kernel {
  T Gm1, Hm1, Q, R1, R2, R3, Rs, g, gm1;
};

template <class T>
inline Kernel<T> kernel(const std::array<T, 8>& y, int m, int eps) {
  const T x1 = y[0], X2 = y[1], X3 = y[2];
  const T Z1 = y[3], Z2 = y[4], Z3 = y[5], Z4 = y[6], W = y[7];
  const T mm = T(m);
  Kernel<T> s;
  s.Gm1 = 2 * x1 + x1 * x1 + 2 * X2 * X2 + 4 * mm * X3 * X3;
  s.Hm1 = x1 + 2 * X2 + 4 * mm * X3;
  s.R1 = 2 * Z1 * Z2 + 4 * mm * Z1 * Z3;
  s.R2 = 4 * Z2 - 2 * Z1 * Z2 + 4 * mm * Z3;
  s.R3 = (4 * mm + 8) * Z4 - 2 * Z1 * Z3 - 4 * Z3;
  s.Rs = s.R1 + 2 * s.R2 + 4 * mm * s.R3;
  const T half_eW = T(eps) * W / 2;
  s.Q = s.Gm1 + s.Rs + T(4 * m + 2) * half_eW;
  s.gm1 = s.Gm1 - half_eW;  // kept apart, 1 + gm1 loses it near p0
  s.g = 1 + s.gm1;
  return s;
}

template <class T>
inline void field(const std::array<T, 8>& y, int m, int eps, std::array<T, 8>& v) {
  const Kernel<T> s = kernel(y, m, eps);
  const T X1 = 1 + y[0], X2 = y[1], X3 = y[2];
  const T half_eW = T(eps) * y[7] / 2;
  const T gm1 = s.gm1;
  v[0] = X1 * gm1 + s.R1 + half_eW;
  v[1] = X2 * gm1 + s.R2 + half_eW;
  v[2] = X3 * gm1 + s.R3 + half_eW;
  v[3] = 2 * y[3] * (X1 - X2);
  v[4] = 2 * y[4] * (s.g - X2);
  v[5] = 2 * y[5] * (s.g + X2 - 2 * X3);
  v[6] = 2 * y[6] * (s.g - X3);
  v[7] = 2 * y[7] * s.g;
}

inline std::array<double, 8> to_shifted(const PhasePoint& p) {
  std::array<double, 8> y = p;
  y[0] = p[0] - 1.0;
  return y;
}

inline PhasePoint from_shifted(const std::array<double, 8>& y) {
  PhasePoint p = y;
  p[0] = 1.0 + y[0];
  return p;
}

// ---------------------------------------------------------------------------

DerivedScalars derived_scalars(const PhasePoint& p, const ModelParams& mp);
DerivedScalars derived_scalars_shifted(const std::array<double, 8>& y, const ModelParams& mp);

PhasePoint vector_field(const PhasePoint& p, const ModelParams& mp);

// Z4^2 - Z2 Z3
double constraint_residual(const PhasePoint& p);
// <grad r, V>, which equals 4 (G - eps W/2 - X3) r
double constraint_residual_derivative(const PhasePoint& p, const ModelParams& mp);

std::array<double, 8> grad_Q(const PhasePoint& p, const ModelParams& mp);
std::array<double, 8> grad_H(const ModelParams& mp);

// <grad Q, V> - [2Q(G - eps W/2) + eps (H-1) W]
double q_flow_consistency(const PhasePoint& p, const ModelParams& mp);
// <grad H, V> - [(H-1)(G - eps W/2 - 1) + Q]
double h_flow_consistency(const PhasePoint& p, const ModelParams& mp);

struct SubsetFlags {
  bool rs = false;
  bool einstein = false;
  bool steady = false;
  bool ricci_flat = false;
  bool fubini_study = false;
  bool kahler_einstein = false;
  bool round = false;
  bool m0 = false;
};

// inequalities are tested as f >= -tol, equalities as |f| <= tol
SubsetFlags subset_membership(const PhasePoint& p, const ModelParams& mp, double tol = 1e-9);

// F_l = X2 - X1 + l (sqrt(Z2/Z1) - sqrt(Z1 Z2)); throws DomainError for Z1 <= 0
double barrier_F(double l, const PhasePoint& p);
// closed form of <grad F_l, V>
double barrier_F_derivative(double l, const PhasePoint& p, const ModelParams& mp);
// <grad F_l, V> from the gradient, used to cross-check the closed form
double barrier_F_derivative_direct(double l, const PhasePoint& p, const ModelParams& mp);

}  // namespace cohom1
