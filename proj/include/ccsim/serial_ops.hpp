#pragma once

// Straight-line serial implementations of the kernel layer. These exist as a
// reference for the OpenMP kernels: tests compare the two, and the benchmark
// tool reports their relative throughput. Keep them simple, not fast.

#include "ccsim/grid.hpp"
#include "ccsim/ops.hpp"

namespace ccsim::serial {

FaceField gradient(const ScalarField& f);
ScalarField divergence(const FaceField& flux);
ScalarField laplacian(const ScalarField& f);
HessField hessian(const ScalarField& f);
double integrate(const ScalarField& f);
double norm_l2(const ScalarField& f);

}  // namespace ccsim::serial
