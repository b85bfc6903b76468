#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohom1/search.hpp"

namespace cohom1 {

struct RegressionCase {
  std::string name;
  ModelParams mp;
  ShootParams sp;
};

// 20 runs over the steady/expanding, Einstein/non-Einstein and k regimes
std::vector<RegressionCase> regression_set();

struct RegressionRow {
  std::string name;
  Classification cls;
  std::string status;
  DriftReport drift;
  bool ok = false;
};

struct VerifyReport {
  std::vector<CatalogAudit> catalogs;  // m = 0..3, both epsilons
  std::vector<AuditReport> audits;     // m = 1, 2
  std::vector<RegressionRow> runs;
  double max_constraint = 0;
  double max_einstein = 0;
  double max_qflow_random = 0;  // q_flow_consistency at random points
  bool catalog_ok = false, audit_ok = false, drift_ok = false, qflow_ok = false;
  bool ok = false;
};

// audit_samples per stratum; rng_seed drives both the sign audit and the random points
VerifyReport run_verify(long audit_samples, std::uint64_t rng_seed, int jobs = 1);

// q_flow_consistency at n random points of the box X in [0,1], Z, W log-uniform in [1e-4, 1]
double max_qflow_random(const ModelParams& mp, long n, std::uint64_t rng_seed);

}  // namespace cohom1
