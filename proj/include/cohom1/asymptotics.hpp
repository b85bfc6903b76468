#pragma once

#include <string>
#include <vector>

#include "cohom1/integrate.hpp"
#include "cohom1/regions.hpp"
#include "cohom1/seed.hpp"

namespace cohom1 {

struct CatalogEntry {
  std::string id;
  PhasePoint point{};
  bool family = false;  // Z1 is a free parameter
};

// p0, p1, p2, q1, q2, the reduced points p1_m0 and q1_m0, the origin family and,
// for epsilon = 1, the q0 family. Families are instantiated at Z1 = z1.
std::vector<CatalogEntry> critical_point_catalog(const ModelParams& mp, double z1 = 0.5);

struct CatalogRow {
  std::string id;
  double z1 = 0;
  PhasePoint point{};
  double v_norm = 0;
  double Q = 0, Hm1 = 0, residual = 0;
  bool ok = false;
};

struct CatalogAudit {
  std::vector<CatalogRow> rows;
  bool ok = false;
};

// V = 0 and Z4^2 = Z2 Z3 everywhere to 1e-12; Q = 0, H = 1 except on the origin family (Q = -1).
CatalogAudit catalog_audit(const ModelParams& mp);

enum class Label { AC, ALC, AP, ACP, AH, Incomplete, Undetermined };
enum class BaseLabel { FubiniStudy, NonKahlerCP, StandardSphere, JensenSphere, NA };
std::string to_string(Label l);
std::string to_string(BaseLabel b);

struct Classification {
  Outcome outcome = Outcome::StaysInB;
  double eta_exit = 0;  // NaN when the run stays in B
  bool ambiguous = false;
  Label label = Label::Undetermined;
  double mu2 = 0;  // lim Z1
  double nu2 = 0;  // lim sqrt(Z3/Z2)
  std::string limit_point;  // catalog id or empty
  BaseLabel base = BaseLabel::NA;
  double a_growth = 0;  // a(t_end)/a(t_end/10), ACP diagnostic; NaN if unavailable
  std::string note;
};

Classification classify(const Trajectory& tr, const ModelParams& mp, const ShootParams& sp, double tol = 1e-2,
                        double band = 1e-9);

struct ProfileRow {
  double eta = 0;
  double t = 0, a = 0, b = 0, c = 0, f = 0;
  double adot = 0, bdot = 0, cdot = 0, fdot = 0;
};

using MetricProfile = std::vector<ProfileRow>;

// a^2 = Z1 W~/Z2, b^2 = W~/Z2, c^2 = W~/Z4, dt/deta = sqrt W~, fdot = (H-1)/sqrt W~.
// normalization multiplies W~ (homothety; must be 1 when epsilon = 1).
MetricProfile reconstruct(const Trajectory& tr, const ModelParams& mp, double normalization = 1.0);

// state (a, adot, b, bdot, c, cdot, f, fdot)
using TState = std::array<double, 8>;
TState integrate_t_system(const ModelParams& mp, const TState& s0, double t0, double t1, double rtol = 1e-14);

struct CrossCheck {
  double t_start = 0, t_end = 0;
  int rows = 0;
  double max_rel_dev = 0;
};

// Re-integrates the second-order system in t from the middle of the run and
// compares a, b, c against the reconstruction over a t-window of the given width.
CrossCheck cross_check_t_system(const Trajectory& tr, const ModelParams& mp, double window = 1.0);

}  // namespace cohom1
