#include "ccsim/serial_ops.hpp"

#include <cmath>

namespace ccsim::serial {

FaceField gradient(const ScalarField& f) {
  const Grid& g = *f.grid;
  FaceField out(g);
  for (int j = 0; j < g.n1; ++j)
    for (int i = 1; i < g.n0; ++i)
      out.f0[static_cast<size_t>(out.i0(i, j))] = (f[g.idx(i, j)] - f[g.idx(i - 1, j)]) / g.h0;
  if (g.dim == 2) {
    if (g.periodic1) {
      for (int j = 0; j < g.n1; ++j) {
        const int jm = (j + g.n1 - 1) % g.n1;
        for (int i = 0; i < g.n0; ++i)
          out.f1[static_cast<size_t>(out.i1(i, j))] =
              (f[g.idx(i, j)] - f[g.idx(i, jm)]) / g.f1_dist[static_cast<size_t>(i)];
      }
    } else {
      for (int j = 1; j < g.n1; ++j)
        for (int i = 0; i < g.n0; ++i)
          out.f1[static_cast<size_t>(out.i1(i, j))] = (f[g.idx(i, j)] - f[g.idx(i, j - 1)]) / g.h1;
    }
  }
  return out;
}

ScalarField divergence(const FaceField& flux) {
  const Grid& g = *flux.grid;
  ScalarField out(g);
  for (int j = 0; j < g.n1; ++j)
    for (int i = 0; i < g.n0; ++i) {
      double s = flux.f0[static_cast<size_t>(flux.i0(i + 1, j))] * g.f0_area[static_cast<size_t>(i + 1)] -
                 flux.f0[static_cast<size_t>(flux.i0(i, j))] * g.f0_area[static_cast<size_t>(i)];
      if (g.dim == 2) {
        const int jhi = g.periodic1 ? (j + 1) % g.n1 : j + 1;
        s += (flux.f1[static_cast<size_t>(flux.i1(i, jhi))] -
              flux.f1[static_cast<size_t>(flux.i1(i, j))]) *
             g.f1_area;
      }
      out[g.idx(i, j)] = s / g.vol[static_cast<size_t>(g.idx(i, j))];
    }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  return serial::divergence(serial::gradient(f));
}

HessField hessian(const ScalarField& f) {
  const Grid& g = *f.grid;
  HessField out;
  out.grid = &g;
  const int n = g.ncells();
  out.h00.assign(static_cast<size_t>(n), 0.0);
  if (g.dim == 2) {
    out.h01.assign(static_cast<size_t>(n), 0.0);
    out.h11.assign(static_cast<size_t>(n), 0.0);
  }
  auto at = [&](int i, int j) { return f.v[static_cast<size_t>(g.ghost(i, j))]; };
  for (int j = 0; j < g.n1; ++j)
    for (int i = 0; i < g.n0; ++i) {
      const int c = g.idx(i, j);
      const double fc = f[c];
      if (g.geom == Geometry::Interval) {
        out.h00[static_cast<size_t>(c)] = (at(i + 1, 0) - 2.0 * fc + at(i - 1, 0)) / (g.h0 * g.h0);
      } else if (g.geom == Geometry::Rectangle) {
        out.h00[static_cast<size_t>(c)] = (at(i + 1, j) - 2.0 * fc + at(i - 1, j)) / (g.h0 * g.h0);
        out.h11[static_cast<size_t>(c)] = (at(i, j + 1) - 2.0 * fc + at(i, j - 1)) / (g.h1 * g.h1);
        out.h01[static_cast<size_t>(c)] =
            (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
            (4.0 * g.h0 * g.h1);
      } else {
        const double fr = (at(i + 1, j) - at(i - 1, j)) / (2.0 * g.h0);
        const double ft = (at(i, j + 1) - at(i, j - 1)) / (2.0 * g.h1);
        const double frr = (at(i + 1, j) - 2.0 * fc + at(i - 1, j)) / (g.h0 * g.h0);
        const double ftt = (at(i, j + 1) - 2.0 * fc + at(i, j - 1)) / (g.h1 * g.h1);
        const double frt =
            (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
            (4.0 * g.h0 * g.h1);
        const double r = g.c0[static_cast<size_t>(i)];
        const double ct = std::cos(g.c1[static_cast<size_t>(j)]);
        const double st = std::sin(g.c1[static_cast<size_t>(j)]);
        const double r2 = r * r;
        out.h00[static_cast<size_t>(c)] = frr * ct * ct - 2.0 * frt * ct * st / r + ftt * st * st / r2 +
                                          fr * st * st / r + 2.0 * ft * ct * st / r2;
        out.h11[static_cast<size_t>(c)] = frr * st * st + 2.0 * frt * ct * st / r + ftt * ct * ct / r2 +
                                          fr * ct * ct / r - 2.0 * ft * ct * st / r2;
        out.h01[static_cast<size_t>(c)] = frr * ct * st + frt * (ct * ct - st * st) / r -
                                          ftt * ct * st / r2 - fr * ct * st / r -
                                          ft * (ct * ct - st * st) / r2;
      }
    }
  return out;
}

double integrate(const ScalarField& f) {
  const Grid& g = *f.grid;
  double s = 0.0;
  for (int c = 0; c < g.ncells(); ++c) s += f[c] * g.vol[static_cast<size_t>(c)];
  return s;
}

double norm_l2(const ScalarField& f) {
  const Grid& g = *f.grid;
  double s = 0.0;
  for (int c = 0; c < g.ncells(); ++c) s += f[c] * f[c] * g.vol[static_cast<size_t>(c)];
  return std::sqrt(s);
}

}  // namespace ccsim::serial
