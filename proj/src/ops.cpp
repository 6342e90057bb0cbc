#include "ccsim/ops.hpp"

#include <cmath>
#include <stdexcept>

#include "ccsim/parallel.hpp"

namespace ccsim {

namespace {
void require_grid(const ScalarField& f, const char* who) {
  if (!f.grid || f.size() != f.grid->ncells())
    throw std::invalid_argument(std::string(who) + ": field not bound to a grid");
}
}  // namespace

FaceField gradient(const ScalarField& f) {
  require_grid(f, "gradient");
  const Grid& g = *f.grid;
  FaceField out(g);
  const int n0 = g.n0, n1 = g.n1;
  // Axis-0 faces; i = 0 and i = n0 stay zero (Neumann).
  par::for_n(n1 * (n0 - 1), [&](int k) {
    const int j = k / (n0 - 1);
    const int i = 1 + k % (n0 - 1);
    out.f0[static_cast<size_t>(out.i0(i, j))] =
        (f[g.idx(i, j)] - f[g.idx(i - 1, j)]) / g.h0;
  });
  if (g.dim == 2) {
    if (g.periodic1) {
      par::for_n(n0 * n1, [&](int k) {
        const int j = k / n0, i = k % n0;
        const int jm = (j + n1 - 1) % n1;
        out.f1[static_cast<size_t>(out.i1(i, j))] =
            (f[g.idx(i, j)] - f[g.idx(i, jm)]) / g.f1_dist[static_cast<size_t>(i)];
      });
    } else {
      par::for_n(n0 * (n1 - 1), [&](int k) {
        const int j = 1 + k / n0, i = k % n0;
        out.f1[static_cast<size_t>(out.i1(i, j))] =
            (f[g.idx(i, j)] - f[g.idx(i, j - 1)]) / g.h1;
      });
    }
  }
  return out;
}

ScalarField divergence(const FaceField& flux) {
  if (!flux.grid) throw std::invalid_argument("divergence: flux not bound to a grid");
  const Grid& g = *flux.grid;
  ScalarField out(g);
  const int n0 = g.n0, n1 = g.n1;
  par::for_n(g.ncells(), [&](int c) {
    const int j = c / n0, i = c % n0;
    double s = flux.f0[static_cast<size_t>(flux.i0(i + 1, j))] * g.f0_area[static_cast<size_t>(i + 1)] -
               flux.f0[static_cast<size_t>(flux.i0(i, j))] * g.f0_area[static_cast<size_t>(i)];
    if (g.dim == 2) {
      const int jhi = g.periodic1 ? (j + 1) % n1 : j + 1;
      s += (flux.f1[static_cast<size_t>(flux.i1(i, jhi))] -
            flux.f1[static_cast<size_t>(flux.i1(i, j))]) *
           g.f1_area;
    }
    out[c] = s / g.vol[static_cast<size_t>(c)];
  });
  return out;
}

ScalarField laplacian(const ScalarField& f) { return divergence(gradient(f)); }

void cell_gradient(const ScalarField& f, std::vector<double>& g0, std::vector<double>& g1) {
  require_grid(f, "cell_gradient");
  const Grid& g = *f.grid;
  const FaceField fg = gradient(f);
  const int n0 = g.n0, n1 = g.n1;
  g0.assign(static_cast<size_t>(g.ncells()), 0.0);
  g1.assign(static_cast<size_t>(g.dim == 2 ? g.ncells() : 0), 0.0);
  par::for_n(g.ncells(), [&](int c) {
    const int j = c / n0, i = c % n0;
    g0[static_cast<size_t>(c)] = 0.5 * (fg.f0[static_cast<size_t>(fg.i0(i, j))] +
                                        fg.f0[static_cast<size_t>(fg.i0(i + 1, j))]);
    if (g.dim == 2) {
      const int jhi = g.periodic1 ? (j + 1) % n1 : j + 1;
      g1[static_cast<size_t>(c)] = 0.5 * (fg.f1[static_cast<size_t>(fg.i1(i, j))] +
                                          fg.f1[static_cast<size_t>(fg.i1(i, jhi))]);
    }
  });
}

std::vector<double> cell_gradsq(const ScalarField& f) {
  std::vector<double> g0, g1;
  cell_gradient(f, g0, g1);
  const int n = f.grid->ncells();
  std::vector<double> out(static_cast<size_t>(n));
  const bool two = !g1.empty();
  par::for_n(n, [&](int c) {
    const double a = g0[static_cast<size_t>(c)];
    const double b = two ? g1[static_cast<size_t>(c)] : 0.0;
    out[static_cast<size_t>(c)] = a * a + b * b;
  });
  return out;
}

HessField hessian(const ScalarField& f) {
  require_grid(f, "hessian");
  const Grid& g = *f.grid;
  HessField out;
  out.grid = &g;
  const int n0 = g.n0, n = g.ncells();
  out.h00.assign(static_cast<size_t>(n), 0.0);
  if (g.dim == 2) {
    out.h01.assign(static_cast<size_t>(n), 0.0);
    out.h11.assign(static_cast<size_t>(n), 0.0);
  }
  const auto& v = f.v;
  auto at = [&](int i, int j) { return v[static_cast<size_t>(g.ghost(i, j))]; };

  if (g.geom == Geometry::Interval) {
    par::for_n(n, [&](int c) {
      out.h00[static_cast<size_t>(c)] = (at(c + 1, 0) - 2.0 * v[static_cast<size_t>(c)] + at(c - 1, 0)) / (g.h0 * g.h0);
    });
  } else if (g.geom == Geometry::Rectangle) {
    par::for_n(n, [&](int c) {
      const int j = c / n0, i = c % n0;
      const double fc = v[static_cast<size_t>(c)];
      out.h00[static_cast<size_t>(c)] = (at(i + 1, j) - 2.0 * fc + at(i - 1, j)) / (g.h0 * g.h0);
      out.h11[static_cast<size_t>(c)] = (at(i, j + 1) - 2.0 * fc + at(i, j - 1)) / (g.h1 * g.h1);
      out.h01[static_cast<size_t>(c)] =
          (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
          (4.0 * g.h0 * g.h1);
    });
  } else {
    // Annulus: central polar derivatives, then the Cartesian frame by the
    // chain rule (x = r cos t, y = r sin t).
    par::for_n(n, [&](int c) {
      const int j = c / n0, i = c % n0;
      const double fc = v[static_cast<size_t>(c)];
      const double fr = (at(i + 1, j) - at(i - 1, j)) / (2.0 * g.h0);
      const double ft = (at(i, j + 1) - at(i, j - 1)) / (2.0 * g.h1);
      const double frr = (at(i + 1, j) - 2.0 * fc + at(i - 1, j)) / (g.h0 * g.h0);
      const double ftt = (at(i, j + 1) - 2.0 * fc + at(i, j - 1)) / (g.h1 * g.h1);
      const double frt = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
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
    });
  }
  return out;
}

double integrate(const ScalarField& f) {
  require_grid(f, "integrate");
  const Grid& g = *f.grid;
  return par::sum_n(g.ncells(), [&](int c) { return f[c] * g.vol[static_cast<size_t>(c)]; });
}

double integrate(const Grid& g, const std::vector<double>& cell_values) {
  if (static_cast<int>(cell_values.size()) != g.ncells())
    throw std::invalid_argument("integrate: value array does not match grid");
  return par::sum_n(g.ncells(),
                    [&](int c) { return cell_values[static_cast<size_t>(c)] * g.vol[static_cast<size_t>(c)]; });
}

double boundary_integrate(const Grid& g, const std::vector<double>& bface_values) {
  if (bface_values.size() != g.bfaces.size())
    throw std::invalid_argument("boundary_integrate: value array does not match boundary faces");
  return par::sum_n(static_cast<int>(g.bfaces.size()), [&](int k) {
    return bface_values[static_cast<size_t>(k)] * g.bfaces[static_cast<size_t>(k)].weight;
  });
}

std::vector<double> boundary_normal_derivative_of_gradsq(const ScalarField& f) {
  require_grid(f, "boundary_normal_derivative_of_gradsq");
  const Grid& g = *f.grid;
  std::vector<double> out(g.bfaces.size(), 0.0);
  if (g.geom == Geometry::Interval) return out;  // exact in 1D
  const std::vector<double> gsq = cell_gradsq(f);
  par::for_n(static_cast<int>(g.bfaces.size()), [&](int k) {
    const BoundaryFace& b = g.bfaces[static_cast<size_t>(k)];
    const double h = b.axis == 0 ? g.h0 : g.h1;
    // (value nearest the wall - next inward) / spacing points along nu.
    out[static_cast<size_t>(k)] =
        (gsq[static_cast<size_t>(b.cell)] - gsq[static_cast<size_t>(b.cell2)]) / h;
  });
  return out;
}

double norm_l1(const ScalarField& f) {
  const Grid& g = *f.grid;
  return par::sum_n(g.ncells(),
                    [&](int c) { return std::abs(f[c]) * g.vol[static_cast<size_t>(c)]; });
}

double norm_l2(const ScalarField& f) {
  const Grid& g = *f.grid;
  return std::sqrt(par::sum_n(g.ncells(), [&](int c) { return f[c] * f[c] * g.vol[static_cast<size_t>(c)]; }));
}

double norm_linf(const ScalarField& f) {
  return par::max_n(f.size(), [&](int c) { return std::abs(f[c]); });
}

double min_value(const ScalarField& f) {
  return par::min_n(f.size(), [&](int c) { return f[c]; });
}

double max_value(const ScalarField& f) {
  return par::max_n(f.size(), [&](int c) { return f[c]; });
}

double inner(const ScalarField& f, const ScalarField& g) {
  if (f.grid != g.grid) throw std::invalid_argument("inner: fields on different grids");
  const Grid& gr = *f.grid;
  return par::sum_n(gr.ncells(),
                    [&](int c) { return f[c] * g[c] * gr.vol[static_cast<size_t>(c)]; });
}

}  // namespace ccsim
