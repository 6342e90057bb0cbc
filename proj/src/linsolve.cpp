#include "ccsim/linsolve.hpp"

#include <cmath>
#include <stdexcept>

#include "ccsim/ops.hpp"
#include "ccsim/parallel.hpp"

namespace ccsim {

namespace {

// Diagonal of A = V - dt*K, where K is the stiffness operator
// (K x = vol .* laplacian(x)). Entry k collects vol_k plus dt times the sum
// of face couplings area/distance over the faces of cell k; boundary faces
// contribute nothing (Neumann).
std::vector<double> helmholtz_diagonal(const Grid& g, double dt) {
  const int n0 = g.n0, n1 = g.n1;
  std::vector<double> d(static_cast<size_t>(g.ncells()), 0.0);
  par::for_n(g.ncells(), [&](int c) {
    const int j = c / n0, i = c % n0;
    double coup = 0.0;
    if (i > 0) coup += g.f0_area[static_cast<size_t>(i)] / g.h0;
    if (i < n0 - 1) coup += g.f0_area[static_cast<size_t>(i + 1)] / g.h0;
    if (g.dim == 2) {
      if (g.periodic1) {
        coup += 2.0 * g.f1_area / g.f1_dist[static_cast<size_t>(i)];
      } else {
        if (j > 0) coup += g.f1_area / g.h1;
        if (j < n1 - 1) coup += g.f1_area / g.h1;
      }
    }
    d[static_cast<size_t>(c)] = g.vol[static_cast<size_t>(c)] + dt * coup;
  });
  return d;
}

}  // namespace

CgResult solve_implicit_diffusion(const ScalarField& rhs, double dt, ScalarField& x,
                                  double tol, int max_iter) {
  if (!rhs.grid || rhs.size() != rhs.grid->ncells())
    throw std::invalid_argument("solve_implicit_diffusion: rhs not bound to a grid");
  if (!(dt > 0.0)) throw std::invalid_argument("solve_implicit_diffusion: dt must be positive");
  const Grid& g = *rhs.grid;
  const int n = g.ncells();
  if (max_iter <= 0) max_iter = 40 * n;

  const std::vector<double> diag = helmholtz_diagonal(g, dt);

  auto apply = [&](const ScalarField& in, ScalarField& out) {
    const ScalarField lap = laplacian(in);
    par::for_n(n, [&](int k) {
      out[k] = g.vol[static_cast<size_t>(k)] * (in[k] - dt * lap[k]);
    });
  };

  ScalarField b(g), r(g), z(g), p(g), ap(g);
  par::for_n(n, [&](int k) { b[k] = g.vol[static_cast<size_t>(k)] * rhs[k]; });
  const double bnorm = std::sqrt(par::sum_n(n, [&](int k) { return b[k] * b[k]; }));

  x = rhs;  // warm start: identity part dominates for small dt
  if (bnorm == 0.0) {
    par::for_n(n, [&](int k) { x[k] = 0.0; });
    return CgResult{0, 0.0, true};
  }

  apply(x, ap);
  par::for_n(n, [&](int k) { r[k] = b[k] - ap[k]; });
  par::for_n(n, [&](int k) { z[k] = r[k] / diag[static_cast<size_t>(k)]; });
  p = z;
  double rz = par::sum_n(n, [&](int k) { return r[k] * z[k]; });
  double rnorm = std::sqrt(par::sum_n(n, [&](int k) { return r[k] * r[k]; }));

  CgResult res;
  res.rel_residual = rnorm / bnorm;
  if (res.rel_residual <= tol) {
    res.converged = true;
    return res;
  }

  for (int it = 1; it <= max_iter; ++it) {
    apply(p, ap);
    const double pap = par::sum_n(n, [&](int k) { return p[k] * ap[k]; });
    if (!(pap > 0.0)) break;  // loss of positive definiteness: report failure
    const double alpha = rz / pap;
    par::for_n(n, [&](int k) { x[k] += alpha * p[k]; });
    par::for_n(n, [&](int k) { r[k] -= alpha * ap[k]; });
    rnorm = std::sqrt(par::sum_n(n, [&](int k) { return r[k] * r[k]; }));
    res.iterations = it;
    res.rel_residual = rnorm / bnorm;
    if (res.rel_residual <= tol) {
      res.converged = true;
      return res;
    }
    par::for_n(n, [&](int k) { z[k] = r[k] / diag[static_cast<size_t>(k)]; });
    const double rz_new = par::sum_n(n, [&](int k) { return r[k] * z[k]; });
    const double beta = rz_new / rz;
    rz = rz_new;
    par::for_n(n, [&](int k) { p[k] = z[k] + beta * p[k]; });
  }
  return res;
}

}  // namespace ccsim
