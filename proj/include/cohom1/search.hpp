#pragma once

#include <string>
#include <vector>

#include "cohom1/asymptotics.hpp"

namespace cohom1 {

struct Shot {
  ShootParams sp;
  Seed seed;
  Trajectory tr;
  Classification cls;
};

// seed, integrate with the region watchers, classify
Shot shoot(const ModelParams& mp, const ShootParams& sp, const IntegratorConfig& cfg);

struct Probe {
  double x = 0;
  Outcome outcome = Outcome::StaysInB;
  double eta_exit = 0;  // NaN when no exit
};

struct Bracket {
  double lo = 0, hi = 0;
};

struct ThresholdResult {
  double estimate = 0;  // midpoint of the final bracket
  double lo = 0, hi = 0;
  double width = 0;
  Outcome lo_outcome = Outcome::EntersC, hi_outcome = Outcome::StaysInB;
  std::vector<Probe> probes;
  std::vector<Probe> audit;  // interior probes for the monotonicity check
  bool monotone = true;
  std::string warning;
};

class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bisects s4 on the EntersC / not-EntersC boundary (s5 = 0, steady), k taken from mp.
ThresholdResult find_alpha(const ModelParams& mp, double theta, Bracket bracket, double tol = 1e-4,
                           const IntegratorConfig& cfg = {}, int jobs = 1);

struct ThetaStarResult {
  double theta = 0;
  double lo = 0, hi = 0;
  bool stays_in_B = false;  // a probe reached the horizon inside B
  std::vector<Probe> probes;
};

// Bisects theta between EntersA (theta = 0) and EntersC (theta = pi) with s4 = s5 = 0, steady.
// tol = 0 bisects down to floating point resolution.
ThetaStarResult find_theta_star(const ModelParams& mp, double tol = 0, const IntegratorConfig& cfg = {});

struct BetaResult {
  double beta = 0;
  std::vector<double> s5_grid;
  std::vector<ThresholdResult> per_s5;
  std::string note;
};

std::vector<double> default_s5_grid();

// max over the grid (plus s5 = 0) of the expanding s4 threshold
BetaResult find_beta(const ModelParams& mp, double theta, const std::vector<double>& s5_grid, Bracket bracket,
                     double tol = 1e-4, const IntegratorConfig& cfg = {}, int jobs = 1);

struct AtlasNode {
  ShootParams sp;
  bool ok = false;
  Classification cls;
  std::string status;
  std::string error;
  std::vector<double> eta, z1, nu;  // thinned series for plots
};

std::vector<AtlasNode> atlas(const ModelParams& mp, const std::vector<double>& theta_grid,
                             const std::vector<double>& s4_grid, const std::vector<double>& s5_grid,
                             const IntegratorConfig& cfg = {}, int jobs = 1);

}  // namespace cohom1
