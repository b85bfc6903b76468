#pragma once

#include <array>
#include <limits>

#include "cohom1/phase.hpp"

namespace cohom1 {

using Matrix8 = std::array<std::array<double, 8>, 8>;

struct ShootParams {
  double theta = 0;
  double s4 = 0;
  double s5 = 0;
  // NaN selects the default depth from the seed scale
  double eta0 = std::numeric_limits<double>::quiet_NaN();
};

// w1..w6 of the unstable eigenspace at p0 (w4 = X1 direction, w5 carries W)
struct EigenBasis {
  std::array<PhasePoint, 6> w;
};

EigenBasis eigen_basis(const ModelParams& mp);

// Analytic Jacobian of V at p0.
Matrix8 jacobian_at_p0(const ModelParams& mp);
// Linear functionals B and C spanning the center directions at p0 (left null vectors).
std::array<PhasePoint, 2> center_functionals(const ModelParams& mp);

struct ArcCoefficients {
  long double s1, s2, s3, s6;
};

// s1 = (1+cos)/2, s2 = (1-cos)/2, s3 = sin/sqrt2, s6 = k^2 (s1 + s2 + sqrt2 s3).
// Angles within 1e-14 of 0 or pi snap to the exact endpoint values.
ArcCoefficients arc_coefficients(int k, double theta);

// w(theta,k) + s4 w4 + s5 w5
std::array<long double, 8> seed_direction(const ModelParams& mp, const ShootParams& sp);

// Largest eta0 with e^{2 eta0} |direction|_inf <= scale.
double default_eta0(const ModelParams& mp, const ShootParams& sp, double scale = 1e-12);

// Seed in shifted coordinates together with the reconstruction gauge.
struct Seed {
  std::array<long double, 8> y{};
  long double ln_wt = 0;  // ln W~ at eta0
  long double t = 0;      // t at eta0, from a ~ k t
  double eta0 = 0;
  double u = 0;  // e^{2 eta0}
  bool einstein = false;
};

// Seed used by the integrator. The first-order point is corrected so that
// Z4^2 = Z2 Z3 holds exactly, and for s4 = 0 it is projected onto H = 1, Q = 0.
Seed make_seed(const ModelParams& mp, const ShootParams& sp, double scale = 1e-12);

// p0 + e^{2 eta0}(w(theta,k) + s4 w4 + s5 w5). Throws DomainError if the
// perturbation exceeds 1e-4 in sup norm, and std::invalid_argument for
// parameters outside theta in [0,pi], s4, s5 >= 0.
PhasePoint build_seed(const ModelParams& mp, const ShootParams& sp);

struct SeedReport {
  double u = 0;
  double q_over_u = 0;         // Q/u
  double one_minus_h_over_u = 0;  // (1-H)/u
  double q_linear = 0;         // <grad Q(p0), direction>, exact first-order coefficient
  double one_minus_h_linear = 0;
  double sqrt_z1_over_z2 = 0;
  double residual = 0;  // Z4^2 - Z2 Z3
  double bound = 0;     // c u, the admissible size of each defect below
  double q_defect = 0, h_defect = 0, k_defect = 0;
  bool ok = false;
};

SeedReport validate_seed(const PhasePoint& p, const ModelParams& mp, const ShootParams& sp);

}  // namespace cohom1
