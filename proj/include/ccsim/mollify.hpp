#pragma once

// Discrete mollification of initial data. The kernel is a truncated Gaussian
// of width 0.5*eps*diam(Omega), discretized per axis, applied separably with
// even reflection at walls (periodic wrap along theta on the Annulus). Every
// output cell is a convex combination of input cells, which is what the
// maximum-principle and positivity guarantees lean on.

#include "ccsim/grid.hpp"

namespace ccsim {

struct MollifierSpec {
  double alpha = 0.5;  // kernel width = alpha * eps * diam(Omega)
  double cutoff = 4.0; // truncation radius in widths
  double width(const Grid& g, double eps) const { return alpha * eps * g.diameter; }
  // Normalized weights for offsets -m..m at spacing `delta`; sums to 1.0
  // exactly (the center weight absorbs the normalization residue).
  std::vector<double> weights(double delta, double eps_width) const;
};

// Kernel-convolve, then rescale so integrate(result) == integrate(raw).
// Rejects negative cells and all-zero input.
ScalarField mollify_u0(const ScalarField& raw, double eps,
                       const MollifierSpec& spec = MollifierSpec{});

// (kernel * sqrt(raw))^2; max(result) <= max(raw) by convexity.
// Rejects nonpositive cells.
ScalarField mollify_v0(const ScalarField& raw, double eps,
                       const MollifierSpec& spec = MollifierSpec{});

// integral of f ln f with the 0*ln 0 = 0 convention; rejects negative cells.
double entropy(const ScalarField& f);

// Exposed for tests: separable convolution pass along one axis.
ScalarField convolve_axis(const ScalarField& f, int axis, double eps,
                          const MollifierSpec& spec);

}  // namespace ccsim
