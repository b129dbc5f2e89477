#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gavg/group.hpp"

namespace gavg {

enum class DomainKind { interval, square, disk, annulus, regular_polygon };

// All domains are scaled to fit [-1,1]^d and centered at the origin.
struct DomainSpec {
  DomainKind kind = DomainKind::square;
  double inner_radius = 0.0;  // annulus only, 0 < inner_radius < 1
  int sides = 0;              // regular_polygon only, >= 3
};

// Closed-domain membership with tolerance `tol` on the defining distances.
bool domain_contains(const DomainSpec& d, double x, double y, double tol);

// Uniform node lattice. ny == 1 means a 1D grid. Node (i,j) sits at
// (ox + i*hx, oy + j*hy); storage index is j*nx + i (row-major).
// `domain` is set by make_grid and lost on file import.
struct Grid {
  int nx = 0;
  int ny = 1;
  double hx = 1.0;
  double hy = 1.0;
  double ox = 0.0;
  double oy = 0.0;
  std::vector<std::uint8_t> mask;  // true = node inside the closed domain
  std::optional<DomainSpec> domain;

  int dim() const { return ny == 1 ? 1 : 2; }
  std::size_t num_nodes() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  bool in_lattice(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
  bool masked(int i, int j) const { return in_lattice(i, j) && mask[index(i, j)] != 0; }
  // Interior = masked with all lattice neighbors masked. These are the free
  // unknowns; zero-trace functions vanish everywhere else.
  bool interior(int i, int j) const;
  double node_x(int i) const { return ox + i * hx; }
  double node_y(int j) const { return dim() == 1 ? oy : oy + j * hy; }
  double node_area() const { return dim() == 1 ? hx : hx * hy; }
  double cell_area() const { return node_area(); }
  std::size_t num_interior() const;
};

using GridPtr = std::shared_ptr<const Grid>;

// resolution = nodes per axis, >= 3. Postcondition: at least one interior node.
GridPtr make_grid(const DomainSpec& spec, int resolution);

// Node values; exactly 0 at mask-false nodes.
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;

  double at(int i, int j) const { return values[grid->index(i, j)]; }
  double& at(int i, int j) { return values[grid->index(i, j)]; }
};

GridFunction make_zero_field(GridPtr grid);

// Zeroes every non-interior node in place.
void project_zero_trace(GridFunction& u);

bool grids_compatible(const Grid& a, const Grid& b);

double sup_norm(const GridFunction& u);
// Node-wise dot product weighted by nodearea.
double weighted_dot(const GridFunction& a, const GridFunction& b);
double weighted_norm2(const GridFunction& u);

// True when g maps every masked node onto a lattice node within 1e-9
// (coordinate units); pullback is then a pure value permutation.
bool is_grid_exact(const GroupElement& g, const Grid& grid);
bool group_is_grid_exact(const SymmetryGroup& g, const Grid& grid);

// (g.u)(x) = u(g x). Permutation path when g is grid-exact, otherwise
// bilinear (1D: linear) interpolation with zero extension outside the mask.
// Output is zero at mask-false nodes. Contravariant:
// pullback(g, pullback(h, u)) == pullback(h*g, u).
GridFunction pullback(const GroupElement& g, const GridFunction& u);

// Corner differences of one lattice cell (ci,cj)-(ci+1,cj+1); 1D cells use
// dxb only. grad_sq = mean of squared x-differences + mean of squared
// y-differences, the cell value of |grad u|^2.
struct CellDifferences {
  double dxb = 0.0, dxt = 0.0;  // x-differences along the bottom/top edges
  double dyl = 0.0, dyr = 0.0;  // y-differences along the left/right edges
  double grad_sq = 0.0;
};

CellDifferences cell_differences(const GridFunction& u, int ci, int cj);

// W^{1,p}-style norm for order 1 (cell gradients + node values); for even
// order 2m uses the m-fold discrete Laplacian in place of the gradient.
double sobolev_norm(const GridFunction& u, double p, int order);

struct DomainInvarianceReport {
  bool invariant = true;
  std::size_t element = 0;  // worst offending group element
  double x = 0.0, y = 0.0;  // worst offending node position
  double violation = 0.0;   // how far outside the domain g maps it
};

// Checks g x stays inside the continuous domain for every masked node x and
// every g. Falls back to a mask-based test when the grid carries no domain.
DomainInvarianceReport check_domain_invariance(const SymmetryGroup& g, const Grid& grid);

// Throws invariant_domain_violation with a witness message on failure.
void require_domain_invariance(const SymmetryGroup& g, const Grid& grid);

// Uniform(-1,1) noise on interior nodes, then `smoothness` local averaging
// passes. Deterministic in (grid, seed, smoothness); zero-trace.
GridFunction random_field(GridPtr grid, std::uint64_t seed, int smoothness);

// m-fold 5-point (1D: 3-point) Laplacian with zero extension outside the
// lattice. Used by the polyharmonic energy and order-2m norms.
std::vector<double> laplacian_power(const GridFunction& u, int m);

}  // namespace gavg
