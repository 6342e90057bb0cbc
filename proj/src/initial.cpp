#include "ccsim/initial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccsim/mollify.hpp"
#include "ccsim/ops.hpp"
#include "ccsim/parallel.hpp"
#include "ccsim/test_functions.hpp"

namespace ccsim {

InitialPair make_initial_pair(const ScalarField& u0_raw, const ScalarField& v0_raw, double eps,
                              bool mollify, bool allow_zero_v) {
  if (u0_raw.grid != v0_raw.grid)
    throw std::invalid_argument("make_initial_pair: u0 and v0 live on different grids");
  for (int c = 0; c < u0_raw.size(); ++c)
    if (u0_raw[c] < 0) throw std::invalid_argument("make_initial_pair: u0 has a negative cell");
  const double vmin = min_value(v0_raw);
  if (!allow_zero_v && !(vmin > 0))
    throw std::invalid_argument("make_initial_pair: v0 must be strictly positive");
  if (vmin < 0) throw std::invalid_argument("make_initial_pair: v0 has a negative cell");

  InitialPair p;
  p.u0 = mollify ? mollify_u0(u0_raw, eps) : u0_raw;
  p.v0 = (mollify && vmin > 0) ? mollify_v0(v0_raw, eps) : v0_raw;
  p.mass = integrate(p.u0);
  if (!(p.mass > 0)) throw std::invalid_argument("make_initial_pair: u0 is identically zero");
  p.mu = p.mass / p.u0.grid->volume;
  p.v_l1 = norm_l1(p.v0);
  p.v_l2 = norm_l2(p.v0);
  p.v_linf = norm_linf(p.v0);
  const std::vector<double> gsq = cell_gradsq(p.v0);
  const Grid& g = *p.v0.grid;
  p.v_fisher = par::sum_n(g.ncells(), [&](int c) {
    const double q = gsq[static_cast<size_t>(c)];
    return q > 0 ? q / p.v0[c] * g.vol[static_cast<size_t>(c)] : 0.0;
  });
  return p;
}

namespace {

struct Bump {
  double cx, cy, sigma, amp;
};

// Gaussian bump evaluated at Cartesian cell centers.
void add_bumps(ScalarField& u, const std::vector<Bump>& bumps) {
  const Grid& g = *u.grid;
  par::for_n(g.ncells(), [&](int c) {
    const int j = c / g.n0, i = c % g.n0;
    double x, y;
    if (g.geom == Geometry::Annulus) {
      const double r = g.c0[static_cast<size_t>(i)];
      const double th = g.c1[static_cast<size_t>(j)];
      x = r * std::cos(th);
      y = r * std::sin(th);
    } else {
      x = g.c0[static_cast<size_t>(i)];
      y = g.dim == 2 ? g.c1[static_cast<size_t>(j)] : 0.0;
    }
    double add = 0.0;
    for (const Bump& b : bumps) {
      const double dx = x - b.cx, dy = y - b.cy;
      add += b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
    }
    u[c] += add;
  });
}

double domain_scale(const Grid& g) {
  switch (g.geom) {
    case Geometry::Interval: return g.p0;
    case Geometry::Rectangle: return g.p0 < g.p1 ? g.p0 : g.p1;
    case Geometry::Annulus: return g.p1 - g.p0;
  }
  return 1.0;
}

// Center points used by the bump scenarios: slightly off-center to avoid
// accidental symmetries.
void bump_center(const Grid& g, int which, double& x, double& y) {
  if (g.geom == Geometry::Interval) {
    x = (which == 0 ? 0.4 : 0.7) * g.p0;
    y = 0.0;
  } else if (g.geom == Geometry::Rectangle) {
    x = (which == 0 ? 0.4 : 0.65) * g.p0;
    y = (which == 0 ? 0.45 : 0.6) * g.p1;
  } else {
    const double rc = 0.5 * (g.p0 + g.p1);
    const double th = which == 0 ? 0.0 : std::numbers::pi;
    x = rc * std::cos(th);
    y = rc * std::sin(th);
  }
}

}  // namespace

InitialPair make_scenario(const Grid& g, const ScenarioSpec& s, double eps) {
  ScalarField u(g, s.u_mean);
  ScalarField v(g, s.v0_level);
  bool mollify = s.mollify;
  bool allow_zero_v = false;

  if (s.name == "homogeneous") {
    // constants as built
  } else if (s.name == "gaussian_bump" || s.name == "two_bumps") {
    const double sigma = s.width * domain_scale(g);
    std::vector<Bump> bumps;
    double x, y;
    bump_center(g, 0, x, y);
    bumps.push_back({x, y, sigma, s.amp});
    if (s.name == "two_bumps") {
      bump_center(g, 1, x, y);
      bumps.push_back({x, y, sigma, 0.75 * s.amp});
    }
    add_bumps(u, bumps);
  } else if (s.name == "random_fourier") {
    TestFnKind kind = TestFnKind::LowFourierPositive;
    TestFnCoeffs coeffs;
    ScalarField m = gen_test_function(s.seed, g, kind, &coeffs);
    // Recenter the probe field to zero mean, scale to amplitude <= 0.9 of the
    // background, and ride it on top of u_mean; keeps u0 >= 0.1*u_mean.
    const double mean = integrate(m) / g.volume;
    double mmax = 0.0;
    for (int c = 0; c < m.size(); ++c) {
      m[c] -= mean;
      mmax = std::max(mmax, std::abs(m[c]));
    }
    const double scale = mmax > 0 ? 0.9 * s.amp / mmax : 0.0;
    par::for_n(u.size(), [&](int c) { u[c] = s.u_mean * (1.0 + scale * m[c]); });
  } else if (s.name == "heat_mode") {
    // Pure-diffusion scenario: v0 = 0 switches off taxis and consumption, and
    // u0 is the first Neumann cosine mode so the exact solution is known.
    const double pi = std::numbers::pi;
    par::for_n(u.size(), [&](int c) {
      const int j = c / g.n0, i = c % g.n0;
      double mode;
      if (g.geom == Geometry::Interval || g.geom == Geometry::Rectangle)
        mode = std::cos(pi * g.c0[static_cast<size_t>(i)] / g.p0);
      else
        mode = std::cos(pi * (g.c0[static_cast<size_t>(i)] - g.p0) / (g.p1 - g.p0));
      (void)j;
      u[c] = s.u_mean + s.amp * mode;
    });
    par::for_n(v.size(), [&](int c) { v[c] = 0.0; });
    mollify = false;
    allow_zero_v = true;
  } else {
    throw std::invalid_argument("unknown scenario '" + s.name + "'");
  }

  return make_initial_pair(u, v, eps, mollify, allow_zero_v);
}

}  // namespace ccsim
