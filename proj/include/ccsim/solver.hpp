#pragma once

// Time integrator for the regularized cell/signal system
//   u_t = div( grad u - (u/(1+eps u)^2) grad v ),
//   v_t = lap v - u v/(1+eps u),
// advanced by an IMEX split chosen so the discrete solution inherits the
// structure the continuous system has: conservative explicit update for u
// (upwinded chemotactic coefficient), implicit diffusion for v (M-matrix
// solve, so max v cannot grow), and the reaction integrated exactly as a
// pointwise exponential contraction. Cumulative time integrals used by the
// growth-rate and budget diagnostics are accumulated every step with
// left-endpoint quadrature.

#include <cstdint>
#include <functional>
#include <string>

#include "ccsim/grid.hpp"
#include "ccsim/initial.hpp"
#include "ccsim/record.hpp"

namespace ccsim {

struct DtPolicy {
  enum class Kind { Fixed, Cfl } kind = Kind::Fixed;
  double dt = 0;        // Fixed: the step size
  double safety = 0.4;  // Cfl: multiplier in (0,1]
  double dt_max = 1.0;  // Cfl: upper cap on the returned step
  static DtPolicy fixed(double dt) { return {Kind::Fixed, dt, 0.4, 1.0}; }
  static DtPolicy cfl(double safety, double dt_max = 1.0) {
    return {Kind::Cfl, 0.0, safety, dt_max};
  }
};

struct SimParams {
  double eps = 0.1;          // regularization strength, in (0,1)
  DtPolicy dt_policy;
  double t_end = 0;
  int diag_cadence = 100;    // steps between diagnostics records
  double mu = 0;             // mean of u0; filled in by run()
  bool moment_enabled = false;
  double moment_p = 4.0;     // exponent of the (u+1)^p/(delta-v) functional
  double moment_delta = 0.02;
  double cg_tol = 1e-12;
  int cg_maxit = 0;          // 0: solver picks
  bool keep_snapshots = false;
};

struct SimState {
  const Grid* grid = nullptr;
  double t = 0;
  int64_t step = 0;
  ScalarField u, v;
  // Left-endpoint time integrals, updated every step.
  double cum_gradv_sq = 0;       // integral of integral |grad v|^2
  double cum_consumption = 0;    // integral of integral u v/(1+eps u)
  double cum_u_dev_l1 = 0;       // integral of integral |u - mu|
  double cum_fisher_u = 0;       // integral of integral |grad u|^2/u
  double cum_hessv_sq = 0;       // integral of integral |D^2 v|^2
  double cum_weighted_gradv = 0; // integral of integral (u/(1+eps u))|grad v|^2/v
  // Exact bookkeeping, independent of time quadrature.
  double consumed_v_mass = 0;    // total signal mass removed by the reaction stage
  double clipped_mass = 0;       // total |mass| clipped from u at zero
  double floored_v_mass = 0;     // total mass added when flooring tiny negative v
};

// Face flux of u: grad u - upwind(u/(1+eps u)^2) * grad v, zero on boundary
// faces. The chemotactic coefficient is taken from the donor cell, i.e. the
// cell the advected quantity flows out of given the sign of the face-normal
// signal gradient.
FaceField flux_u(const SimState& s, double eps);

// Stability-limited step: safety * min(h^2/(2 dim), h / max_face |velocity|)
// with velocity = grad v/(1+eps u_donor)^2 and h the smallest cell spacing;
// the advective bound is skipped when the velocity vanishes. The result is
// capped at policy.dt_max.
double cfl_dt(const SimState& s, double eps, const DtPolicy& policy);

// One accepted step of size dt. Throws on linear-solve failure, on NaN, and
// on negative v beyond the floor tolerance; the message carries t and step.
void step(SimState& s, const SimParams& p, double dt);

SimState make_state(const Grid& g, const InitialPair& init);

// Advance to t_end, recording diagnostics at step 0, every diag_cadence
// steps, and the final step. Cumulative integrals advance every step
// regardless of cadence. The optional hook sees every record as it is made.
using RecordHook = std::function<void(const SimState&, const DiagRecord&)>;
Trajectory run(const Grid& g, const InitialPair& init, const SimParams& p,
               SimState* final_state = nullptr, const RecordHook& hook = {});

// Checkpointing: two field snapshots plus one CSV line of scalars; a
// fixed-dt run restarted from a checkpoint reproduces the original
// trajectory bit-exactly.
void save_checkpoint(const std::string& dir, const SimState& s);
SimState load_checkpoint(const std::string& dir, const Grid& g);

}  // namespace ccsim
