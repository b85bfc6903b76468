#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohom1/integrate.hpp"

namespace cohom1 {

enum class ExitKind { None, ViaZ1, ViaX };

struct RegionState {
  bool in_F = false, in_A = false, in_B = false, in_C = false;
  ExitKind exit_kind = ExitKind::None;  // face of B the point sits on, if any
  std::string diagnostic;
};

RegionState region_of(const PhasePoint& p, const ModelParams& mp, double tol = 1e-9);

// 2(sqrt Z2 - sqrt Z3) + X3 - X2
double face_function(const PhasePoint& p);
// K = 1 + (4m-4) sqrt Z3 - 4 sqrt Z2 + 2 Z1 (sqrt Z2 + sqrt Z3)
double k_factor(const PhasePoint& p, const ModelParams& mp);

// enter_A: X1 - X2 falls below -band. enter_C: Z1 rises above 1 + band (terminal).
std::vector<Watcher> region_watchers(double band);

enum class Outcome { EntersA, EntersC, StaysInB };
std::string to_string(Outcome o);

struct Transition {
  Outcome outcome = Outcome::StaysInB;
  std::optional<double> eta_exit;
  // both exit functions vanish within the band at the exit point
  bool ambiguous = false;
  std::string note;
};

Transition watch_transitions(const Trajectory& tr, const ModelParams& mp, double band = 1e-9);

struct WitnessReport {
  bool h_applicable = false;   // (H-1)/sqrt(-Q), s4 > 0
  bool z1_applicable = false;  // (sqrt Z1)'/sqrt(-Q), s4 > 0
  bool z_applicable = false;   // Z2^{2m+3} Z3^{2m} / Z1, Ricci-flat runs
  double h_violation = 0;      // largest increase
  double z1_violation = 0;     // largest increase
  double z_violation = 0;      // largest relative decrease
  long samples_used = 0;
  std::vector<std::string> diagnostics;
};

// Evaluated on samples up to the exit from B.
WitnessReport monotone_witnesses(const Trajectory& tr, const ModelParams& mp, double s4, double band = 1e-9);

struct StratumResult {
  std::string name;
  bool gating = true;
  long accepted = 0;
  long attempts = 0;
  double min_value = 0;
  PhasePoint argmin{};
};

struct AuditReport {
  std::vector<StratumResult> strata;
  bool ok = false;
};

AuditReport boundary_sign_audit(const ModelParams& mp, long n_samples, std::uint64_t rng_seed);

}  // namespace cohom1
