#include "ccsim/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccsim {

std::string geometry_name(Geometry g) {
  switch (g) {
    case Geometry::Interval: return "interval";
    case Geometry::Rectangle: return "rectangle";
    case Geometry::Annulus: return "annulus";
  }
  return "?";
}

Geometry geometry_from_name(const std::string& name) {
  if (name == "interval") return Geometry::Interval;
  if (name == "rectangle") return Geometry::Rectangle;
  if (name == "annulus") return Geometry::Annulus;
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

double Grid::min_spacing() const {
  if (dim == 1) return h0;
  if (!periodic1) return h0 < h1 ? h0 : h1;
  // Annulus: tightest azimuthal spacing sits on the innermost cell ring.
  const double s1 = c0.front() * h1;
  return h0 < s1 ? h0 : s1;
}

std::string Grid::resolution_string() const {
  if (dim == 1) return std::to_string(n0);
  return std::to_string(n0) + "x" + std::to_string(n1);
}

Grid make_interval(double length, int n) {
  if (!(length > 0)) throw std::invalid_argument("interval length must be positive");
  if (n < 4) throw std::invalid_argument("interval needs at least 4 cells");
  Grid g;
  g.geom = Geometry::Interval;
  g.dim = 1;
  g.n0 = n;
  g.n1 = 1;
  g.p0 = length;
  g.h0 = length / n;
  g.c0.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) g.c0[static_cast<size_t>(i)] = (i + 0.5) * g.h0;
  g.c1 = {0.0};
  g.vol.assign(static_cast<size_t>(n), g.h0);
  g.f0_area.assign(static_cast<size_t>(n + 1), 1.0);
  g.volume = length;
  g.curvature_bound = 0.0;
  g.diameter = length;
  g.bfaces.push_back({0, 1, 0, -1, 1.0, 0.0});
  g.bfaces.push_back({n - 1, n - 2, 0, +1, 1.0, 0.0});
  return g;
}

Grid make_rectangle(double lx, double ly, int nx, int ny) {
  if (!(lx > 0) || !(ly > 0)) throw std::invalid_argument("rectangle sides must be positive");
  if (nx < 4 || ny < 4) throw std::invalid_argument("rectangle needs at least 4 cells per axis");
  Grid g;
  g.geom = Geometry::Rectangle;
  g.dim = 2;
  g.n0 = nx;
  g.n1 = ny;
  g.p0 = lx;
  g.p1 = ly;
  g.h0 = lx / nx;
  g.h1 = ly / ny;
  g.c0.resize(static_cast<size_t>(nx));
  g.c1.resize(static_cast<size_t>(ny));
  for (int i = 0; i < nx; ++i) g.c0[static_cast<size_t>(i)] = (i + 0.5) * g.h0;
  for (int j = 0; j < ny; ++j) g.c1[static_cast<size_t>(j)] = (j + 0.5) * g.h1;
  g.vol.assign(static_cast<size_t>(nx * ny), g.h0 * g.h1);
  g.f0_area.assign(static_cast<size_t>(nx + 1), g.h1);
  g.f1_area = g.h0;
  g.f1_dist.assign(static_cast<size_t>(nx), g.h1);
  g.volume = lx * ly;
  g.curvature_bound = 0.0;
  g.diameter = std::hypot(lx, ly);
  for (int j = 0; j < ny; ++j) {
    g.bfaces.push_back({g.idx(0, j), g.idx(1, j), 0, -1, g.h1, g.c1[static_cast<size_t>(j)]});
    g.bfaces.push_back({g.idx(nx - 1, j), g.idx(nx - 2, j), 0, +1, g.h1, g.c1[static_cast<size_t>(j)]});
  }
  for (int i = 0; i < nx; ++i) {
    g.bfaces.push_back({g.idx(i, 0), g.idx(i, 1), 1, -1, g.h0, g.c0[static_cast<size_t>(i)]});
    g.bfaces.push_back({g.idx(i, ny - 1), g.idx(i, ny - 2), 1, +1, g.h0, g.c0[static_cast<size_t>(i)]});
  }
  return g;
}

Grid make_annulus(double r0, double r1, int nr, int ntheta) {
  if (!(r0 > 0) || !(r1 > r0)) throw std::invalid_argument("annulus needs 0 < r0 < r1");
  if (nr < 4 || ntheta < 4) throw std::invalid_argument("annulus needs at least 4 cells per axis");
  Grid g;
  g.geom = Geometry::Annulus;
  g.dim = 2;
  g.periodic1 = true;
  g.n0 = nr;
  g.n1 = ntheta;
  g.p0 = r0;
  g.p1 = r1;
  g.h0 = (r1 - r0) / nr;
  g.h1 = 2.0 * std::numbers::pi / ntheta;
  g.c0.resize(static_cast<size_t>(nr));
  g.c1.resize(static_cast<size_t>(ntheta));
  for (int i = 0; i < nr; ++i) g.c0[static_cast<size_t>(i)] = r0 + (i + 0.5) * g.h0;
  for (int j = 0; j < ntheta; ++j) g.c1[static_cast<size_t>(j)] = (j + 0.5) * g.h1;
  g.vol.resize(static_cast<size_t>(nr * ntheta));
  // Midpoint radius gives the exact polar cell area r_c*dr*dtheta.
  for (int j = 0; j < ntheta; ++j)
    for (int i = 0; i < nr; ++i)
      g.vol[static_cast<size_t>(g.idx(i, j))] = g.c0[static_cast<size_t>(i)] * g.h0 * g.h1;
  g.f0_area.resize(static_cast<size_t>(nr + 1));
  for (int i = 0; i <= nr; ++i) g.f0_area[static_cast<size_t>(i)] = (r0 + i * g.h0) * g.h1;
  g.f1_area = g.h0;
  g.f1_dist.resize(static_cast<size_t>(nr));
  for (int i = 0; i < nr; ++i) g.f1_dist[static_cast<size_t>(i)] = g.c0[static_cast<size_t>(i)] * g.h1;
  g.volume = std::numbers::pi * (r1 * r1 - r0 * r0);
  g.curvature_bound = 1.0 / r0;
  g.diameter = 2.0 * r1;
  for (int j = 0; j < ntheta; ++j) {
    const double th = g.c1[static_cast<size_t>(j)];
    g.bfaces.push_back({g.idx(0, j), g.idx(1, j), 0, -1, r0 * g.h1, th});
    g.bfaces.push_back({g.idx(nr - 1, j), g.idx(nr - 2, j), 0, +1, r1 * g.h1, th});
  }
  return g;
}

}  // namespace ccsim
