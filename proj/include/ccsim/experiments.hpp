#pragma once

// Configuration-driven campaigns. Each mode writes its artifacts under the
// configured output directory and returns a list of named check outcomes;
// the process exit code is 0 exactly when every enabled check passed.
//
//   simulate     one run: diag.csv, optional fields/t<k>.csv, a final
//                checkpoint, summary.json; asserts the structural invariants
//                (mass, signal monotonicity, budgets, positivity logs,
//                energy signs, the flux Young chain, power boundedness).
//   eps_sweep    several regularization strengths on one grid and dt;
//                pairwise space-time L1 distances of u, grad u, and the
//                chemotactic flux; asserts the u and flux distances shrink
//                along the ladder.
//   asymptotics  one long run; first-passage tables for signal mass and max,
//                growth-exponent fits of the cumulative integrals, decay-rate
//                fit, moment-functional log; asserts sublinear growth and
//                exponential decay targets.
//   inequalities seeded ensembles for the functional inequalities plus the
//                ODE comparison sweep; asserts a 100% pass rate after the
//                refine-and-retry protocol.

#include <string>
#include <vector>

#include "ccsim/config.hpp"
#include "ccsim/record.hpp"

namespace ccsim {

struct CheckOutcome {
  std::string id;
  bool pass = false;
  std::string detail;  // one line: values, tolerances, context
};

struct ExperimentResult {
  int exit_code = 1;
  std::vector<CheckOutcome> checks;
  std::string out_dir;
};

struct SweepReport {
  std::vector<double> eps;
  // Entry i compares members i and i+1.
  std::vector<double> dist_u, dist_gradu, dist_flux;
  bool u_monotone = false, gradu_monotone = false, flux_monotone = false;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Exposed for tests (run_experiment wraps these and writes artifacts).
ExperimentResult run_simulate(const ExperimentConfig& cfg);
ExperimentResult run_eps_sweep(const ExperimentConfig& cfg, SweepReport* report = nullptr);
ExperimentResult run_asymptotics(const ExperimentConfig& cfg);
ExperimentResult run_inequalities(const ExperimentConfig& cfg);

}  // namespace ccsim
