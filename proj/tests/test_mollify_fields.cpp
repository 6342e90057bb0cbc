#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/initial.hpp"
#include "ccsim/mollify.hpp"
#include "ccsim/ops.hpp"
#include "ccsim/test_functions.hpp"

using namespace ccsim;

namespace {

// Direct one-axis convolution with even reflection (wrap along a periodic
// axis), written independently of the library's separable pass. Along theta
// on the annulus the physical spacing is the arc length at the ring's
// radius, so the kernel is rebuilt per ring.
ScalarField brute_convolve_axis(const ScalarField& f, int axis, double eps,
                                const MollifierSpec& spec) {
  const Grid& g = *f.grid;
  ScalarField out(g);
  for (int j = 0; j < g.n1; ++j)
    for (int i = 0; i < g.n0; ++i) {
      double delta = axis == 0 ? g.h0 : g.h1;
      if (axis == 1 && g.periodic1) delta = g.f1_dist[static_cast<size_t>(i)];
      const std::vector<double> w = spec.weights(delta, spec.width(g, eps));
      const int m = static_cast<int>(w.size() / 2);
      double s = 0;
      for (int o = -m; o <= m; ++o) {
        const int ii = axis == 0 ? i + o : i;
        const int jj = axis == 1 ? j + o : j;
        s += w[static_cast<size_t>(o + m)] * f[g.ghost(ii, jj)];
      }
      out[g.idx(i, j)] = s;
    }
  return out;
}

double fisher(const ScalarField& v) {
  const Grid& g = *v.grid;
  const std::vector<double> gsq = cell_gradsq(v);
  double s = 0;
  for (int c = 0; c < g.ncells(); ++c)
    s += g.vol[static_cast<size_t>(c)] * gsq[static_cast<size_t>(c)] / v[c];
  return s;
}

}  // namespace

TEST_CASE("mollify_u0: exact mass, positivity, input validation") {
  const Grid g = make_rectangle(1.0, 1.0, 24, 24);
  ScalarField raw = gen_test_function(3, g, TestFnKind::BumpPlusFloor);
  const double mass = integrate(raw);
  const ScalarField m = mollify_u0(raw, 0.1);
  CHECK(integrate(m) == doctest::Approx(mass).epsilon(1e-13));
  CHECK(min_value(m) >= 0.0);

  ScalarField bad = raw;
  bad[5] = -1e-3;
  CHECK_THROWS(mollify_u0(bad, 0.1));
  const ScalarField zero(g, 0.0);
  CHECK_THROWS(mollify_u0(zero, 0.1));
}

TEST_CASE("mollify_v0: max principle in both directions") {
  const Grid g = make_annulus(0.5, 1.5, 20, 40);
  const ScalarField raw = gen_test_function(9, g, TestFnKind::LowFourierPositive);
  const ScalarField m = mollify_v0(raw, 0.15);
  CHECK(max_value(m) <= max_value(raw) * (1 + 1e-14));
  CHECK(min_value(m) >= min_value(raw) * (1 - 1e-14));

  ScalarField bad = raw;
  bad[0] = 0.0;
  CHECK_THROWS(mollify_v0(bad, 0.15));
}

TEST_CASE("convolve_axis matches a brute-force convolution") {
  const MollifierSpec spec;
  {
    const Grid g = make_rectangle(1.4, 0.9, 12, 10);
    const ScalarField f = gen_test_function(17, g, TestFnKind::LowFourierPositive);
    for (int axis : {0, 1}) {
      const ScalarField lib = convolve_axis(f, axis, 0.2, spec);
      const ScalarField ref = brute_convolve_axis(f, axis, 0.2, spec);
      for (int c = 0; c < g.ncells(); ++c)
        CHECK(lib[c] == doctest::Approx(ref[c]).epsilon(1e-13));
    }
  }
  {  // periodic wrap along theta
    const Grid g = make_annulus(1.0, 2.0, 8, 16);
    const ScalarField f = gen_test_function(21, g, TestFnKind::LowFourierPositive);
    const ScalarField lib = convolve_axis(f, 1, 0.3, spec);
    const ScalarField ref = brute_convolve_axis(f, 1, 0.3, spec);
    for (int c = 0; c < g.ncells(); ++c)
      CHECK(lib[c] == doctest::Approx(ref[c]).epsilon(1e-13));
  }
}

TEST_CASE("mollifier weights: normalized, symmetric, positive") {
  const MollifierSpec spec;
  const std::vector<double> w = spec.weights(0.01, 0.035);
  double s = 0;
  for (double x : w) {
    CHECK(x > 0.0);
    s += x;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  for (size_t k = 0; k < w.size() / 2; ++k) CHECK(w[k] == w[w.size() - 1 - k]);
}

TEST_CASE("entropy: two-level oracle and 0 ln 0 convention") {
  const Grid g = make_interval(1.0, 64);
  ScalarField u(g, 0.0);
  for (int i = 0; i < 32; ++i) u[i] = 2.0;  // half the volume at 2, half at 0
  CHECK(entropy(u) == doctest::Approx(std::numbers::ln2).epsilon(1e-13));

  ScalarField bad(g, 1.0);
  bad[3] = -0.5;
  CHECK_THROWS(entropy(bad));
}

TEST_CASE("mollification does not inflate the signal Fisher information") {
  const Grid g = make_interval(1.0, 512);
  ScalarField raw(g);
  for (int i = 0; i < g.n0; ++i) {
    const double x = g.c0[static_cast<size_t>(i)];
    raw[i] = 0.2 + std::exp(-120.0 * (x - 0.45) * (x - 0.45));
  }
  const double f_raw = fisher(raw);
  for (double eps : {0.05, 0.1, 0.2})
    CHECK(fisher(mollify_v0(raw, eps)) <= f_raw * 1.05);
}

TEST_CASE("probe generator: closed form from exposed coefficients") {
  const Grid g = make_annulus(1.0, 2.0, 16, 32);
  TestFnCoeffs coeffs;
  const ScalarField f = gen_test_function(123, g, TestFnKind::LowFourierPositive, &coeffs);
  const ScalarField re = eval_test_function(g, coeffs);
  CHECK(f.v == re.v);
  CHECK(min_value(f) >= coeffs.floor * (1 - 1e-14));

  // Draws depend only on the domain, not the resolution: the same seed on a
  // finer grid samples the same continuum function.
  const Grid fine = make_annulus(1.0, 2.0, 32, 64);
  TestFnCoeffs cf;
  gen_test_function(123, fine, TestFnKind::LowFourierPositive, &cf);
  CHECK(cf.a == coeffs.a);
  CHECK(cf.k0 == coeffs.k0);
  CHECK(cf.k1 == coeffs.k1);
  CHECK(cf.phase == coeffs.phase);

  const ScalarField other = gen_test_function(124, g, TestFnKind::LowFourierPositive);
  CHECK(f.v != other.v);
}

TEST_CASE("initial pair: mass bookkeeping and scenario validation") {
  const Grid g = make_interval(1.0, 128);
  ScenarioSpec s;
  s.name = "gaussian_bump";
  s.u_mean = 1.0;
  s.amp = 2.0;
  const InitialPair ip = make_scenario(g, s, 0.1);
  CHECK(ip.mass == doctest::Approx(integrate(ip.u0)).epsilon(1e-14));
  CHECK(ip.mu == doctest::Approx(ip.mass / g.volume).epsilon(1e-14));
  CHECK(ip.v_l1 == doctest::Approx(integrate(ip.v0)).epsilon(1e-14));
  CHECK(min_value(ip.v0) > 0.0);

  ScenarioSpec bad = s;
  bad.name = "no_such_scenario";
  CHECK_THROWS(make_scenario(g, bad, 0.1));
}

TEST_CASE("heat-mode scenario: v0 identically zero, u0 a pure cosine mode") {
  const Grid g = make_interval(1.0, 64);
  ScenarioSpec s;
  s.name = "heat_mode";
  s.u_mean = 1.0;
  s.amp = 0.5;
  const InitialPair ip = make_scenario(g, s, 0.1);
  CHECK(max_value(ip.v0) == 0.0);
  CHECK(min_value(ip.v0) == 0.0);
  for (int i = 0; i < g.n0; ++i) {
    const double exact = 1.0 + 0.5 * std::cos(std::numbers::pi * g.c0[static_cast<size_t>(i)]);
    CHECK(ip.u0[i] == doctest::Approx(exact).epsilon(1e-14));
  }
}
