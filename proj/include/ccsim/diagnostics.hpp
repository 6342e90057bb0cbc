#pragma once

// Evaluation of the tracked functionals on solver states and trajectories:
// the energy and its dissipation terms, the boundary production term, the
// per-record residual of the energy identity, growth-rate fits of the
// cumulative integrals, the moment functional with its admissibility gate,
// weak-form residuals against space-time test functions, and long-time
// convergence summaries.

#include <functional>
#include <vector>

#include "ccsim/record.hpp"
#include "ccsim/solver.hpp"

namespace ccsim {

// Entropy-plus-gradient energy: integral of u ln(u/mu) + 0.5 |grad v|^2 / v.
// Requires v > 0 everywhere (error names the offending cell); u may touch
// zero (0 ln 0 = 0).
double energy_F(const ScalarField& u, const ScalarField& v, double mu);

struct DissipationTerms {
  double fisher_u = 0;       // integral of |grad u|^2 / u
  double hess_logv = 0;      // integral of v |D^2 ln v|^2
  double weighted_gradv = 0; // 0.5 integral of (u/(1+eps u)) |grad v|^2 / v
  double total() const { return fisher_u + hess_logv + weighted_gradv; }
};

// Requires v > 0 and u >= 0; a cell with u = 0 contributes nothing to the
// Fisher term provided its gradient is negligible (otherwise an error names
// the cell).
DissipationTerms dissipation_D(const ScalarField& u, const ScalarField& v, double eps);

// 0.5 * boundary integral of (1/v) d|grad v|^2/dnu; identically zero on the
// Interval, sign-indefinite on the Annulus.
double boundary_energy_term(const ScalarField& v);

// [F(after) - F(before)]/dt + D(before) - boundary_term(before); the signed
// defect of the discrete energy identity over one interval.
double energy_residual(const SimState& before, const SimState& after, double eps,
                       double mu);

// The dissipation-balance quantities reported side by side (nothing is
// asserted; the comparison constants are not explicit). dF_dt is a finite
// difference against prev and NaN without one.
struct BalanceReport {
  double fisher_u = 0;       // integral of |grad u|^2 / u
  double u_dev_l1_sq = 0;    // (integral of |u - mu|)^2
  double hessv_over_v = 0;   // integral of |D^2 v|^2 / v
  double weighted_gradv = 0; // integral of (u/(1+eps u)) |grad v|^2 / v
  double dF_dt = 0;
  double gradv_l1 = 0;       // integral of |grad v|
};
BalanceReport balance_report(const SimState& s, double eps, double mu,
                             const SimState* prev = nullptr);

// Least-squares exponent of Q(T) ~ C T^beta over records with t in [t1, t2].
struct GrowthFit {
  double t1 = 0, t2 = 0;
  double beta = 0;
  double logC = 0;
  double residual = 0;  // rms misfit in log space
  int samples = 0;
  bool quantity_zero = false;  // the quantity vanished over the whole window
};
enum class CumQuantity { UDevL1, FisherU, HessVSq, WeightedGradV };
GrowthFit growth_fit(const Trajectory& traj, CumQuantity q, double t1, double t2);

// Admissibility gate of the moment functional: the expression
// (2p + delta p(p-1))^2 / (3p(p-1)) + p delta - 2, which must be <= 0.
double moment_delta_gate(double p, double delta);

// integral of (u+1)^p / (delta - v); requires p > 3, the gate to hold, and
// max v < delta/2.
double moment_functional(const ScalarField& u, const ScalarField& v, double p,
                         double delta);

// Space-time test function in the grid's natural coordinates (x | x,y | r,theta).
// d0/d1 are the physical gradient components (d1 = (1/r) d/dtheta on the
// Annulus), matching what the discrete cell gradient returns.
struct WeakTestFn {
  std::function<double(double t, double a, double b)> value;
  std::function<double(double t, double a, double b)> d_t;
  std::function<double(double t, double a, double b)> d0;
  std::function<double(double t, double a, double b)> d1;  // unused in 1D
};

// Signed space-time defects of the two weak-form identities, evaluated by
// trapezoid quadrature over the trajectory's snapshots. The trajectory must
// have been run with keep_snapshots, and phi must vanish at the final sample.
std::pair<double, double> weak_residual(const Trajectory& traj, const WeakTestFn& phi);

struct ConvergenceReport {
  std::vector<double> t;           // record times
  std::vector<double> u_dev_linf;  // max |u - mu| per record
  std::vector<double> v_linf;
  double v_rate = 0;               // exponential decay rate over the final decade
  double rate_t1 = 0, rate_t2 = 0; // fit window
  std::vector<double> thresholds;  // {1e-1, 1e-2, 1e-3}
  std::vector<double> t_pass_u;    // first record time with u_dev_linf below; NaN if never
  std::vector<double> t_pass_v;
};
// Requires the run to have at least halved max v (otherwise there is no
// decade to fit).
ConvergenceReport convergence_report(const Trajectory& traj);

// Measured discrete mean-oscillation constant: max over a seeded ensemble of
// integral |psi - mean| / integral |grad psi|.
double measure_poincare_l1(const Grid& g, int nsamples, uint64_t seed);

// Full diagnostics row for a state; prev supplies the energy-identity
// residual (NaN without one). Undefined entries (energy terms when v touches
// zero, disabled moment) come back as NaN.
DiagRecord make_record(const SimState& s, const SimParams& p, double dt_in_effect,
                       const DiagRecord* prev);

}  // namespace ccsim
