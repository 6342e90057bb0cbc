#pragma once

// Cell-centered finite-volume grids on three boundary-fitted geometries:
//   Interval(L)          - 1D, n0 cells
//   Rectangle(Lx, Ly)    - 2D Cartesian, n0 x n1 cells
//   Annulus(r0, r1)      - 2D polar, uniform in r and theta, theta periodic
// Homogeneous Neumann boundaries are built into every operator (zero normal
// flux on boundary faces, mirror ghosts for point stencils).

#include <cstdint>
#include <string>
#include <vector>

namespace ccsim {

enum class Geometry : uint8_t { Interval = 0, Rectangle = 1, Annulus = 2 };

std::string geometry_name(Geometry g);
Geometry geometry_from_name(const std::string& name);

struct BoundaryFace {
  int cell;       // cell adjacent to the face
  int cell2;      // next cell inward along the normal axis
  int axis;       // axis of the outward normal (0 or 1)
  int side;       // -1: low end of the axis, +1: high end
  double weight;  // boundary measure (1 in 1D, arc/edge length in 2D)
  double pos0;    // coordinate along the boundary (theta on Annulus, x/y on
                  // Rectangle); 0 in 1D
};

struct Grid {
  Geometry geom = Geometry::Interval;
  int dim = 1;
  int n0 = 0;              // cells along axis 0 (x or r)
  int n1 = 1;              // cells along axis 1 (y or theta); 1 in 1D
  double p0 = 0, p1 = 0;   // Interval: L,-; Rectangle: Lx,Ly; Annulus: r0,r1
  double h0 = 0, h1 = 0;   // spacings (dx | dx,dy | dr,dtheta)
  bool periodic1 = false;  // axis 1 wraps (Annulus)

  std::vector<double> c0, c1;   // cell-center coordinates per axis
  std::vector<double> vol;      // cell volumes (n0*n1)
  std::vector<double> f0_area;  // axis-0 face areas, per i = 0..n0
  double f1_area = 0;           // axis-1 face area (constant per grid)
  std::vector<double> f1_dist;  // axis-1 center-to-center distance, per i
  std::vector<BoundaryFace> bfaces;

  double volume = 0;            // |Omega|
  double curvature_bound = 0;   // max boundary curvature (1/r0 on Annulus)
  double diameter = 0;

  int ncells() const { return n0 * n1; }
  int idx(int i, int j) const { return j * n0 + i; }
  // Smallest center-to-center spacing, used by the CFL policy.
  double min_spacing() const;
  std::string resolution_string() const;

  // Reflected/wrapped cell lookup for ghost stencils (|off| <= n cells).
  int ghost(int i, int j) const {
    if (i < 0) i = -1 - i;
    else if (i >= n0) i = 2 * n0 - 1 - i;
    if (dim == 2) {
      if (periodic1) {
        j = (j + n1) % n1;
      } else {
        if (j < 0) j = -1 - j;
        else if (j >= n1) j = 2 * n1 - 1 - j;
      }
    } else {
      j = 0;
    }
    return idx(i, j);
  }
};

// Factories validate their inputs (at least 4 cells per axis, positive
// lengths, 0 < r0 < r1) and guarantee sum(vol) == |Omega| to 1e-12 relative.
Grid make_interval(double length, int n);
Grid make_rectangle(double lx, double ly, int nx, int ny);
Grid make_annulus(double r0, double r1, int nr, int ntheta);

struct ScalarField {
  const Grid* grid = nullptr;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(&g), v(static_cast<size_t>(g.ncells()), fill) {}

  double& operator[](int k) { return v[static_cast<size_t>(k)]; }
  double operator[](int k) const { return v[static_cast<size_t>(k)]; }
  int size() const { return static_cast<int>(v.size()); }
};

// Face-normal components of a vector field. f0 holds the physical component
// along +axis0 at axis-0 faces, indexed j*(n0+1)+i for i = 0..n0. f1 holds
// the +axis1 component at axis-1 faces: on non-periodic grids indexed
// j*n0+i for j = 0..n1 (size n0*(n1+1)); on the Annulus the face at
// theta_j = j*dtheta sits between cells j-1 (mod n1) and j (size n0*n1).
struct FaceField {
  const Grid* grid = nullptr;
  std::vector<double> f0, f1;

  FaceField() = default;
  explicit FaceField(const Grid& g) : grid(&g) {
    f0.assign(static_cast<size_t>((g.n0 + 1) * g.n1), 0.0);
    if (g.dim == 2)
      f1.assign(static_cast<size_t>(g.periodic1 ? g.n0 * g.n1
                                                : g.n0 * (g.n1 + 1)),
                0.0);
  }
  int i0(int i, int j) const { return j * (grid->n0 + 1) + i; }
  int i1(int i, int j) const { return j * grid->n0 + i; }
};

}  // namespace ccsim
