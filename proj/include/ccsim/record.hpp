#pragma once

// Per-record diagnostics row and the trajectory container a run produces.
// The column order is fixed and documented here; io.cpp writes diag.csv in
// exactly this order and the README repeats it. Entries that are undefined
// for a state (energy terms when v touches zero, the residual at the first
// record, the moment functional when disabled) are stored as NaN.

#include <cstdint>
#include <string>
#include <vector>

#include "ccsim/grid.hpp"

namespace ccsim {

struct DiagRecord {
  int64_t step = 0;
  double t = 0;
  double dt = 0;                  // step size in effect when the record was taken
  double mass = 0;                // integral of u
  double v_l1 = 0, v_l2 = 0, v_linf = 0;
  double energy = 0;              // entropy + 0.5*integral(|grad v|^2 / v)
  double diss_fisher_u = 0;       // integral of |grad u|^2 / u
  double diss_hess_logv = 0;      // integral of v |D^2 ln v|^2
  double diss_weighted_gradv = 0; // 0.5 * integral of (u/(1+eps u)) |grad v|^2 / v
  double boundary_term = 0;       // 0.5 * boundary integral of (1/v) d|grad v|^2/dnu
  double energy_residual = 0;     // [F_k - F_{k-1}]/dt + D_{k-1} - B_{k-1}
  double u_dev_l1 = 0, u_dev_linf = 0;
  double u_power = 0;             // integral of u^((n+2)/n)
  double gradu_power = 0;         // integral of |grad u|^((n+2)/(n+1))
  double flux_power = 0;          // integral of |u/(1+eps u)^2 grad v|^((n+2)/(n+1))
  double weighted_gradv_sq = 0;   // integral of (u/(1+eps u)) |grad v|^2
  double cum_gradv_sq = 0;        // time integral of integral |grad v|^2
  double cum_consumption = 0;     // left-endpoint time integral of integral u v/(1+eps u)
  double cum_consumed_exact = 0;  // total v mass removed by the exact reaction stage
  double cum_u_dev_l1 = 0;        // time integral of integral |u - mu|
  double cum_fisher_u = 0;        // time integral of integral |grad u|^2/u
  double cum_hessv_sq = 0;        // time integral of integral |D^2 v|^2
  double cum_weighted_gradv = 0;  // time integral of integral (u/(1+eps u))|grad v|^2/v
  double moment = 0;              // integral of (u+1)^p/(delta - v) when enabled
  double clipped_mass = 0;        // cumulative |mass| clipped from u at 0
  double floored_v_mass = 0;      // cumulative mass added flooring tiny negative v
};

// diag.csv column names in write order.
const std::vector<std::string>& diag_columns();

struct Snapshot {
  double t = 0;
  ScalarField u, v;
};

struct Trajectory {
  const Grid* grid = nullptr;
  double eps = 0;
  double mu = 0;  // mean of the initial u, conserved
  std::vector<DiagRecord> records;
  std::vector<Snapshot> snapshots;  // populated only when the run keeps fields
};

}  // namespace ccsim
