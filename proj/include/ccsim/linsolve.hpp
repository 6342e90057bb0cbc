#pragma once

// Implicit diffusion stage: solve x - dt*laplacian(x) = rhs. Multiplying by
// the cell volumes gives a symmetric positive-definite system (the stiffness
// form of the Neumann Laplacian), which a Jacobi-preconditioned conjugate
// gradient solves matrix-free through the same gradient/divergence kernels
// the rest of the code uses. All inner products go through the deterministic
// blocked reduction, so solves are reproducible across thread counts.

#include "ccsim/grid.hpp"

namespace ccsim {

struct CgResult {
  int iterations = 0;
  double rel_residual = 0.0;  // ||b - A x|| / ||b||, weighted system
  bool converged = false;
};

CgResult solve_implicit_diffusion(const ScalarField& rhs, double dt, ScalarField& x,
                                  double tol = 1e-12, int max_iter = 0);

}  // namespace ccsim
