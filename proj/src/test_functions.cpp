#include "ccsim/test_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccsim/parallel.hpp"

namespace ccsim {

TestFnKind test_fn_kind_from_name(const std::string& name) {
  if (name == "low_fourier_positive") return TestFnKind::LowFourierPositive;
  if (name == "bump_plus_floor") return TestFnKind::BumpPlusFloor;
  if (name == "radial") return TestFnKind::Radial;
  throw std::invalid_argument("unknown test-function kind '" + name + "'");
}

std::string test_fn_kind_name(TestFnKind k) {
  switch (k) {
    case TestFnKind::LowFourierPositive: return "low_fourier_positive";
    case TestFnKind::BumpPlusFloor: return "bump_plus_floor";
    case TestFnKind::Radial: return "radial";
  }
  return "?";
}

namespace {

// C-infinity bump: exp(1 - 1/(1-t^2)) on |t| < 1, zero outside.
inline double smooth_bump(double t) {
  const double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t2));
}

// Cartesian coordinates of a cell center.
inline void cell_xy(const Grid& g, int i, int j, double& x, double& y) {
  if (g.geom == Geometry::Annulus) {
    const double r = g.c0[static_cast<size_t>(i)];
    const double th = g.c1[static_cast<size_t>(j)];
    x = r * std::cos(th);
    y = r * std::sin(th);
  } else {
    x = g.c0[static_cast<size_t>(i)];
    y = g.dim == 2 ? g.c1[static_cast<size_t>(j)] : 0.0;
  }
}

}  // namespace

ScalarField eval_test_function(const Grid& g, const TestFnCoeffs& c) {
  ScalarField f(g, c.floor);
  const double pi = std::numbers::pi;
  const int nterms = static_cast<int>(c.a.size());
  const int nbumps = static_cast<int>(c.camp.size());
  par::for_n(g.ncells(), [&](int cell) {
    const int j = cell / g.n0, i = cell % g.n0;
    double val = c.floor;
    for (int t = 0; t < nterms; ++t) {
      const double a = c.a[static_cast<size_t>(t)];
      const int k0 = c.k0[static_cast<size_t>(t)];
      const int k1 = c.k1[static_cast<size_t>(t)];
      double mode;
      if (g.geom == Geometry::Interval) {
        mode = std::cos(k0 * pi * g.c0[static_cast<size_t>(i)] / g.p0);
      } else if (g.geom == Geometry::Rectangle) {
        mode = std::cos(k0 * pi * g.c0[static_cast<size_t>(i)] / g.p0) *
               std::cos(k1 * pi * g.c1[static_cast<size_t>(j)] / g.p1);
      } else {
        const double rad = k0 == 0 ? 1.0
                                   : std::cos(k0 * pi * (g.c0[static_cast<size_t>(i)] - g.p0) /
                                              (g.p1 - g.p0));
        const double azi = std::cos(k1 * g.c1[static_cast<size_t>(j)] +
                                    c.phase[static_cast<size_t>(t)]);
        mode = k1 == 0 ? rad : rad * azi;
      }
      val += a * (1.0 + mode);  // each term is nonnegative
    }
    if (nbumps > 0) {
      double x, y;
      cell_xy(g, i, j, x, y);
      for (int b = 0; b < nbumps; ++b) {
        const double dx = x - c.cx[static_cast<size_t>(b)];
        const double dy = y - c.cy[static_cast<size_t>(b)];
        const double d = std::sqrt(dx * dx + dy * dy);
        val += c.camp[static_cast<size_t>(b)] * smooth_bump(d / c.cw[static_cast<size_t>(b)]);
      }
    }
    f[cell] = val;
  });
  return f;
}

ScalarField gen_test_function(uint64_t seed, const Grid& g, TestFnKind kind,
                              TestFnCoeffs* out_coeffs) {
  std::mt19937_64 rng(seed);
  TestFnCoeffs c;
  c.kind = kind;
  c.seed = seed;
  const double pi2 = 2.0 * std::numbers::pi;

  if (kind == TestFnKind::LowFourierPositive) {
    if (g.geom == Geometry::Interval) {
      for (int k = 1; k <= 4; ++k) {
        c.a.push_back(uniform(rng, 0.0, 0.5) / (k * k));
        c.k0.push_back(k);
        c.k1.push_back(0);
        c.phase.push_back(0.0);
      }
    } else if (g.geom == Geometry::Rectangle) {
      const int modes[6][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}, {2, 2}};
      for (const auto& m : modes) {
        c.a.push_back(uniform(rng, 0.0, 0.4) / (m[0] * m[0] + m[1] * m[1]));
        c.k0.push_back(m[0]);
        c.k1.push_back(m[1]);
        c.phase.push_back(0.0);
      }
    } else {
      const int modes[8][2] = {{1, 0}, {2, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 1}, {2, 2}};
      for (const auto& m : modes) {
        c.a.push_back(uniform(rng, 0.0, 0.4) / (1.0 + m[0] * m[0] + m[1] * m[1]));
        c.k0.push_back(m[0]);
        c.k1.push_back(m[1]);
        c.phase.push_back(m[1] > 0 ? uniform(rng, 0.0, pi2) : 0.0);
      }
    }
  } else if (kind == TestFnKind::BumpPlusFloor) {
    const int nb = 2;
    for (int b = 0; b < nb; ++b) {
      double cx, cy, w;
      if (g.geom == Geometry::Interval) {
        w = uniform(rng, 0.08, 0.2) * g.p0;
        cx = uniform(rng, w + 0.02 * g.p0, g.p0 - w - 0.02 * g.p0);
        cy = 0.0;
      } else if (g.geom == Geometry::Rectangle) {
        w = uniform(rng, 0.08, 0.2) * (g.p0 < g.p1 ? g.p0 : g.p1);
        cx = uniform(rng, w + 0.02 * g.p0, g.p0 - w - 0.02 * g.p0);
        cy = uniform(rng, w + 0.02 * g.p1, g.p1 - w - 0.02 * g.p1);
      } else {
        const double dr = g.p1 - g.p0;
        w = uniform(rng, 0.1, 0.2) * dr;
        const double rc = uniform(rng, g.p0 + w + 0.02 * dr, g.p1 - w - 0.02 * dr);
        const double tc = uniform(rng, 0.0, pi2);
        cx = rc * std::cos(tc);
        cy = rc * std::sin(tc);
      }
      c.cx.push_back(cx);
      c.cy.push_back(cy);
      c.cw.push_back(w);
      c.camp.push_back(uniform(rng, 0.5, 2.0));
    }
  } else {  // Radial
    if (g.geom == Geometry::Rectangle)
      throw std::invalid_argument("gen_test_function: radial kind undefined on Rectangle");
    for (int k = 1; k <= 4; ++k) {
      c.a.push_back(uniform(rng, 0.0, 0.5) / (k * k));
      c.k0.push_back(k);
      c.k1.push_back(0);
      c.phase.push_back(0.0);
    }
  }

  if (out_coeffs) *out_coeffs = c;
  return eval_test_function(g, c);
}

}  // namespace ccsim
