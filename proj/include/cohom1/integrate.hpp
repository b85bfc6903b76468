#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cohom1/phase.hpp"
#include "cohom1/seed.hpp"

namespace cohom1 {

struct IntegratorConfig {
  // error control is done in long double on shifted coordinates
  double rtol = 1e-16;
  double atol = 1e-26;
  double eta_max = 60;
  long max_steps = 2000000;
  double event_tol = 1e-10;
  double constraint_tol = 1e-9;
  double h_max = 0.5;

  bool stop_on_convergence = true;
  double conv_dist = 1e-6;
  double conv_speed = 1e-5;
  int conv_steps = 3;

  // region membership band and the integration window kept after a terminal event
  double region_tol = 1e-9;
  double grace = 0.5;
  double blowup_norm = 1e8;

  bool renormalize_z4 = false;
  // Einstein runs: pull the state back onto Q = 0, H = 1 after every accepted step.
  // Both sets are invariant but transversally unstable near the cone points.
  bool project_einstein = true;
  double seed_scale = 1e-12;
};

// Scalar event function. Fires when fn changes sign in the given direction
// (-1 falling, +1 rising, 0 either). Firing disables every watcher of the same group.
struct Watcher {
  std::string name;
  std::function<double(const PhasePoint&)> fn;
  int direction = 0;
  bool terminal = false;
  int group = -1;
};

struct Event {
  double eta = 0;
  std::string name;
  int watcher = -1;
  bool terminal = false;
};

struct Sample {
  double eta = 0;
  std::array<double, 8> y{};  // shifted coordinates, y[0] = X1 - 1
  DerivedScalars d;
  double ln_wt = 0;  // ln W~
  double t = 0;
  double f = 0;

  PhasePoint p() const { return from_shifted(y); }
};

enum class Status {
  ReachedHorizon,
  ConvergedToCriticalPoint,
  LeftRS,
  NumericalFailure,
  StoppedByEvent,
  Escaped
};

std::string to_string(Status s);

// Convergence target; free_z1 marks the families whose Z1 coordinate is free.
struct Target {
  std::string id;
  PhasePoint point{};
  bool free_z1 = false;
};

struct Trajectory {
  ModelParams mp;
  std::vector<Sample> samples;
  std::vector<Event> events;
  Status status = Status::ReachedHorizon;
  std::string converged_to;
  std::string message;
  bool einstein = false;
  long steps = 0;
  long rejected = 0;
  double max_step_drift = 0;  // largest max(|Q|, |H-1|) seen before a projection
};

// Integrates from a shifted long double seed. An empty target list means the
// critical point catalog of mp (p0 excluded).
Trajectory integrate(const Seed& seed, const ModelParams& mp, const IntegratorConfig& cfg,
                     const std::vector<Watcher>& watchers = {}, const std::vector<Target>& targets = {});

// Convenience overload for an arbitrary start point.
Trajectory integrate(const PhasePoint& p, double eta0, const ModelParams& mp, const IntegratorConfig& cfg,
                     const std::vector<Watcher>& watchers = {}, const std::vector<Target>& targets = {});

struct DriftReport {
  double max_constraint = 0;   // max |Z4^2 - Z2 Z3| before the first terminal event
  double max_qflow = 0;        // max |q_flow_consistency|, same window
  double max_einstein = 0;     // max(|Q|, |H-1|) over samples and pre-projection states, Einstein runs only (else NaN)
  double max_abs_w = 0;        // max |W|
  bool einstein = false;
};

DriftReport monitor_drift(const Trajectory& tr);

}  // namespace cohom1
