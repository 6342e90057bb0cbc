#pragma once

// Seeded generators for smooth, strictly positive probe fields. These feed
// the functional-inequality ensembles, so every kind is built from blocks
// whose normal derivative vanishes on the boundary (cosine modes, compactly
// supported bumps), keeping them compatible with the Neumann closure of the
// grid operators. Minimum value is >= 0.1 by a constant floor.

#include <cstdint>
#include <random>

#include "ccsim/grid.hpp"

namespace ccsim {

enum class TestFnKind { LowFourierPositive, BumpPlusFloor, Radial };

TestFnKind test_fn_kind_from_name(const std::string& name);
std::string test_fn_kind_name(TestFnKind k);

// The drawn parameters, exposed so tests can re-evaluate the closed form.
struct TestFnCoeffs {
  TestFnKind kind = TestFnKind::LowFourierPositive;
  uint64_t seed = 0;
  double floor = 0.1;
  // Fourier terms: amplitude a, mode numbers (k0 along x/r, k1 along y/theta),
  // azimuthal phase (Annulus only).
  std::vector<double> a;
  std::vector<int> k0, k1;
  std::vector<double> phase;
  // Bump terms: center (Cartesian), radius, amplitude.
  std::vector<double> cx, cy, cw, camp;
};

// Deterministic evaluators used by the seeded generator (and directly by
// tests): field value for given coefficients at a given cell.
ScalarField eval_test_function(const Grid& g, const TestFnCoeffs& coeffs);

ScalarField gen_test_function(uint64_t seed, const Grid& g, TestFnKind kind,
                              TestFnCoeffs* out_coeffs = nullptr);

// Portable uniform double in [lo, hi) from a mt19937_64 stream.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace ccsim
