#pragma once

// Finite-volume operators. All of them close the domain with homogeneous
// Neumann conditions: face gradients vanish on boundary faces and point
// stencils use mirror ghosts. divergence/gradient pair up so that
// laplacian = divergence(gradient(.)) is conservative, symmetric in the
// volume-weighted inner product, and negative semidefinite.

#include "ccsim/grid.hpp"

namespace ccsim {

// Symmetric second-derivative tensor per cell. On the Annulus the entries
// are the Cartesian-frame values obtained from polar derivatives by the
// chain rule, so frobenius_sq is the Euclidean |D^2 f|^2 everywhere.
struct HessField {
  const Grid* grid = nullptr;
  std::vector<double> h00, h01, h11;  // h01/h11 empty in 1D

  double frobenius_sq(int k) const {
    const double a = h00[static_cast<size_t>(k)];
    if (h11.empty()) return a * a;
    const double b = h01[static_cast<size_t>(k)];
    const double c = h11[static_cast<size_t>(k)];
    return a * a + 2.0 * b * b + c * c;
  }
};

FaceField gradient(const ScalarField& f);
ScalarField divergence(const FaceField& flux);
ScalarField laplacian(const ScalarField& f);
HessField hessian(const ScalarField& f);

// Face-normal components averaged back to cell centers (physical components;
// axis 1 is the theta direction on the Annulus).
void cell_gradient(const ScalarField& f, std::vector<double>& g0, std::vector<double>& g1);
// |grad f|^2 at cell centers from the averaged face gradient.
std::vector<double> cell_gradsq(const ScalarField& f);

double integrate(const ScalarField& f);
double integrate(const Grid& g, const std::vector<double>& cell_values);
// Sum of data over boundary faces weighted by the boundary measure.
double boundary_integrate(const Grid& g, const std::vector<double>& bface_values);

// One-sided derivative of |grad f|^2 along the outward normal at each
// boundary face, from the two cell layers adjacent to the face. Identically
// zero on Interval (f_x = 0 at an endpoint forces (f_x^2)_x = 0 there).
std::vector<double> boundary_normal_derivative_of_gradsq(const ScalarField& f);

double norm_l1(const ScalarField& f);
double norm_l2(const ScalarField& f);
double norm_linf(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
// Volume-weighted inner product <f,g> = integral of f*g.
double inner(const ScalarField& f, const ScalarField& g);

}  // namespace ccsim
