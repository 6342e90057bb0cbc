#pragma once

// Initial-data construction: validate (u0 >= 0 with positive mass, v0 > 0),
// mollify both fields at the run's regularization strength, and derive the
// conserved quantities the invariant checks compare against.

#include <cstdint>
#include <string>

#include "ccsim/grid.hpp"

namespace ccsim {

struct InitialPair {
  ScalarField u0, v0;
  double mass = 0;     // integral of u0
  double mu = 0;       // mass / |Omega|
  double v_l1 = 0, v_l2 = 0, v_linf = 0;
  double v_fisher = 0; // integral of |grad v0|^2 / v0
};

// If mollify is set, u0 passes through mollify_u0 and v0 through mollify_v0
// (the latter skipped when allow_zero_v admits a v0 that touches zero, as in
// the pure-diffusion scenario).
InitialPair make_initial_pair(const ScalarField& u0_raw, const ScalarField& v0_raw, double eps,
                              bool mollify = true, bool allow_zero_v = false);

struct ScenarioSpec {
  std::string name = "homogeneous";  // homogeneous | gaussian_bump | two_bumps |
                                     // random_fourier | heat_mode
  double u_mean = 1.0;   // background/floor level of u0
  double amp = 1.0;      // bump height / mode amplitude
  double width = 0.12;   // bump width relative to the domain scale
  double v0_level = 1.0; // constant raw v0
  uint64_t seed = 1;     // random_fourier draw
  bool mollify = true;   // heat_mode forces this off
};

InitialPair make_scenario(const Grid& g, const ScenarioSpec& s, double eps);

}  // namespace ccsim
