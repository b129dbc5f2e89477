#include "gavg/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gavg/errors.hpp"
#include "gavg/numeric.hpp"

namespace gavg {

namespace {
constexpr double kSnapTol = 1e-9;        // lattice snap distance, coordinate units
constexpr double kMaskTol = 1e-12;       // closed-domain membership for masks
constexpr double kInvarianceTol = 1e-9;  // membership slack for mapped nodes

// Signed distance-like excess: <= 0 inside the closed domain.
double domain_excess(const DomainSpec& d, double x, double y) {
  switch (d.kind) {
    case DomainKind::interval:
      return std::abs(x) - 1.0;
    case DomainKind::square:
      return std::max(std::abs(x), std::abs(y)) - 1.0;
    case DomainKind::disk:
      return std::hypot(x, y) - 1.0;
    case DomainKind::annulus: {
      const double r = std::hypot(x, y);
      return std::max(r - 1.0, d.inner_radius - r);
    }
    case DomainKind::regular_polygon: {
      // Unit-circumradius polygon, one vertex on the positive x-axis,
      // vertices counterclockwise.
      const double two_pi = 6.283185307179586476925286766559;
      double worst = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < d.sides; ++j) {
        const double a0 = two_pi * j / d.sides;
        const double a1 = two_pi * (j + 1) / d.sides;
        const double vx = std::cos(a0), vy = std::sin(a0);
        const double ex = std::cos(a1) - vx, ey = std::sin(a1) - vy;
        const double len = std::hypot(ex, ey);
        // Outward normal of a counterclockwise edge.
        const double nx = ey / len, ny = -ex / len;
        worst = std::max(worst, (x - vx) * nx + (y - vy) * ny);
      }
      return worst;
    }
  }
  return 1.0;
}

}  // namespace

bool domain_contains(const DomainSpec& d, double x, double y, double tol) {
  return domain_excess(d, x, y) <= tol;
}

bool Grid::interior(int i, int j) const {
  if (!masked(i, j)) return false;
  if (dim() == 1) return masked(i - 1, 0) && masked(i + 1, 0);
  return masked(i - 1, j) && masked(i + 1, j) && masked(i, j - 1) && masked(i, j + 1);
}

std::size_t Grid::num_interior() const {
  std::size_t n = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (interior(i, j)) ++n;
  return n;
}

GridPtr make_grid(const DomainSpec& spec, int resolution) {
  if (resolution < 3) throw invalid_parameter("grid resolution must be >= 3");
  if (spec.kind == DomainKind::annulus &&
      !(spec.inner_radius > 0.0 && spec.inner_radius < 1.0))
    throw invalid_parameter("annulus inner radius must lie in (0,1)");
  if (spec.kind == DomainKind::regular_polygon && spec.sides < 3)
    throw invalid_parameter("regular polygon needs >= 3 sides");

  Grid g;
  g.nx = resolution;
  g.hx = 2.0 / (resolution - 1);
  // Same centering formula as import_field, so exported grids reload
  // bit-identically.
  g.ox = -0.5 * ((g.nx - 1) * g.hx);
  if (spec.kind == DomainKind::interval) {
    g.ny = 1;
    g.hy = 1.0;
    g.oy = 0.0;
  } else {
    g.ny = resolution;
    g.hy = g.hx;
    g.oy = -0.5 * ((g.ny - 1) * g.hy);
  }
  g.mask.assign(g.num_nodes(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (domain_contains(spec, g.node_x(i), g.node_y(j), kMaskTol))
        g.mask[g.index(i, j)] = 1;
  g.domain = spec;
  if (g.num_interior() == 0)
    throw invalid_parameter("grid has no interior nodes; increase the resolution");
  return std::make_shared<const Grid>(std::move(g));
}

GridFunction make_zero_field(GridPtr grid) {
  GridFunction u;
  u.values.assign(grid->num_nodes(), 0.0);
  u.grid = std::move(grid);
  return u;
}

void project_zero_trace(GridFunction& u) {
  const Grid& g = *u.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!g.interior(i, j)) u.values[g.index(i, j)] = 0.0;
}

bool grids_compatible(const Grid& a, const Grid& b) {
  return a.nx == b.nx && a.ny == b.ny && a.hx == b.hx && a.hy == b.hy &&
         a.ox == b.ox && a.oy == b.oy && a.mask == b.mask;
}

double sup_norm(const GridFunction& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double weighted_dot(const GridFunction& a, const GridFunction& b) {
  if (!grids_compatible(*a.grid, *b.grid))
    throw invalid_parameter("weighted_dot: incompatible grids");
  KahanSum s;
  for (std::size_t k = 0; k < a.values.size(); ++k) s.add(a.values[k] * b.values[k]);
  return s.value() * a.grid->node_area();
}

double weighted_norm2(const GridFunction& u) { return std::sqrt(weighted_dot(u, u)); }

namespace {

// Maps node (i,j) through g onto the lattice; false when it misses a node by
// more than the snap tolerance or leaves the lattice.
bool map_to_lattice(const Grid& grid, const GroupElement& g, int i, int j,
                    int& oi, int& oj) {
  const Point p = g.apply({grid.node_x(i), grid.node_y(j)});
  const double fi = (p.x - grid.ox) / grid.hx;
  const long long ri = std::llround(fi);
  if (ri < 0 || ri >= grid.nx) return false;
  if (std::abs(p.x - grid.node_x(static_cast<int>(ri))) > kSnapTol) return false;
  long long rj = 0;
  if (grid.dim() == 2) {
    const double fj = (p.y - grid.oy) / grid.hy;
    rj = std::llround(fj);
    if (rj < 0 || rj >= grid.ny) return false;
    if (std::abs(p.y - grid.node_y(static_cast<int>(rj))) > kSnapTol) return false;
  }
  oi = static_cast<int>(ri);
  oj = static_cast<int>(rj);
  return true;
}

double value_or_zero(const GridFunction& u, int i, int j) {
  return u.grid->in_lattice(i, j) ? u.values[u.grid->index(i, j)] : 0.0;
}

// Bilinear (1D: linear) interpolation with zero extension.
double interpolate(const GridFunction& u, double x, double y) {
  const Grid& g = *u.grid;
  const double fi = (x - g.ox) / g.hx;
  const double i0f = std::floor(fi);
  const int i0 = static_cast<int>(i0f);
  const double tx = fi - i0f;
  if (g.dim() == 1) {
    return (1.0 - tx) * value_or_zero(u, i0, 0) + tx * value_or_zero(u, i0 + 1, 0);
  }
  const double fj = (y - g.oy) / g.hy;
  const double j0f = std::floor(fj);
  const int j0 = static_cast<int>(j0f);
  const double ty = fj - j0f;
  const double v00 = value_or_zero(u, i0, j0);
  const double v10 = value_or_zero(u, i0 + 1, j0);
  const double v01 = value_or_zero(u, i0, j0 + 1);
  const double v11 = value_or_zero(u, i0 + 1, j0 + 1);
  return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) +
         ty * ((1.0 - tx) * v01 + tx * v11);
}

}  // namespace

bool is_grid_exact(const GroupElement& g, const Grid& grid) {
  if (g.dim() != grid.dim())
    throw invalid_parameter("group element dimension does not match the grid");
  int oi, oj;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.mask[grid.index(i, j)] && !map_to_lattice(grid, g, i, j, oi, oj))
        return false;
  return true;
}

bool group_is_grid_exact(const SymmetryGroup& g, const Grid& grid) {
  for (const GroupElement& e : g.elements)
    if (!is_grid_exact(e, grid)) return false;
  return true;
}

GridFunction pullback(const GroupElement& g, const GridFunction& u) {
  const Grid& grid = *u.grid;
  if (g.dim() != grid.dim())
    throw invalid_parameter("group element dimension does not match the grid");

  GridFunction out = make_zero_field(u.grid);

  // Permutation path: every masked node must land on a lattice node.
  std::vector<std::size_t> src(grid.num_nodes(), 0);
  bool exact = true;
  for (int j = 0; j < grid.ny && exact; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const std::size_t idx = grid.index(i, j);
      if (!grid.mask[idx]) continue;
      int oi, oj;
      if (!map_to_lattice(grid, g, i, j, oi, oj)) {
        exact = false;
        break;
      }
      src[idx] = grid.index(oi, oj);
    }

  if (exact) {
    for (std::size_t idx = 0; idx < src.size(); ++idx)
      if (grid.mask[idx]) out.values[idx] = u.values[src[idx]];
    return out;
  }

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const std::size_t idx = grid.index(i, j);
      if (!grid.mask[idx]) continue;
      const Point p = g.apply({grid.node_x(i), grid.node_y(j)});
      out.values[idx] = interpolate(u, p.x, p.y);
    }
  return out;
}

CellDifferences cell_differences(const GridFunction& u, int ci, int cj) {
  const Grid& g = *u.grid;
  CellDifferences d;
  if (g.dim() == 1) {
    d.dxb = (u.values[g.index(ci + 1, 0)] - u.values[g.index(ci, 0)]) / g.hx;
    d.grad_sq = d.dxb * d.dxb;
    return d;
  }
  const double v00 = u.values[g.index(ci, cj)];
  const double v10 = u.values[g.index(ci + 1, cj)];
  const double v01 = u.values[g.index(ci, cj + 1)];
  const double v11 = u.values[g.index(ci + 1, cj + 1)];
  d.dxb = (v10 - v00) / g.hx;
  d.dxt = (v11 - v01) / g.hx;
  d.dyl = (v01 - v00) / g.hy;
  d.dyr = (v11 - v10) / g.hy;
  // Mean of the squared differences per direction; bit-invariant under the
  // lattice symmetries (pairs only ever swap or negate).
  const double msqx = 0.5 * (d.dxb * d.dxb + d.dxt * d.dxt);
  const double msqy = 0.5 * (d.dyl * d.dyl + d.dyr * d.dyr);
  d.grad_sq = msqx + msqy;
  return d;
}

std::vector<double> laplacian_power(const GridFunction& u, int m) {
  if (m < 1) throw invalid_parameter("laplacian power must be >= 1");
  const Grid& g = *u.grid;
  std::vector<double> cur = u.values;
  std::vector<double> next(cur.size(), 0.0);
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = g.dim() == 2 ? 1.0 / (g.hy * g.hy) : 0.0;
  auto at = [&](const std::vector<double>& v, int i, int j) {
    return g.in_lattice(i, j) ? v[g.index(i, j)] : 0.0;
  };
  for (int pass = 0; pass < m; ++pass) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double c = cur[g.index(i, j)];
        double lap;
        if (g.dim() == 1) {
          lap = (at(cur, i - 1, 0) + at(cur, i + 1, 0) - 2.0 * c) * ihx2;
        } else if (g.hx == g.hy) {
          // Sorted neighbor sum: the stencil value is identical after any
          // lattice rotation or reflection.
          double nb[4] = {at(cur, i - 1, j), at(cur, i + 1, j),
                          at(cur, i, j - 1), at(cur, i, j + 1)};
          std::sort(nb, nb + 4);
          lap = (((nb[0] + nb[1]) + nb[2]) + nb[3] - 4.0 * c) * ihx2;
        } else {
          lap = (at(cur, i - 1, j) + at(cur, i + 1, j) - 2.0 * c) * ihx2 +
                (at(cur, i, j - 1) + at(cur, i, j + 1) - 2.0 * c) * ihy2;
        }
        next[g.index(i, j)] = lap;
      }
    cur.swap(next);
  }
  return cur;
}

double sobolev_norm(const GridFunction& u, double p, int order) {
  if (!(p > 1.0)) throw invalid_parameter("sobolev_norm requires p > 1");
  if (order != 1 && (order < 2 || order % 2 != 0))
    throw invalid_parameter("sobolev_norm order must be 1 or an even integer");
  const Grid& g = *u.grid;
  KahanSum s;
  if (order == 1) {
    const int cj_end = g.dim() == 1 ? 1 : g.ny - 1;
    for (int cj = 0; cj < cj_end; ++cj)
      for (int ci = 0; ci < g.nx - 1; ++ci)
        s.add(std::pow(cell_differences(u, ci, cj).grad_sq, p / 2.0) * g.cell_area());
  } else {
    const std::vector<double> v = laplacian_power(u, order / 2);
    for (double x : v) s.add(std::pow(std::abs(x), p) * g.node_area());
  }
  for (double x : u.values) s.add(std::pow(std::abs(x), p) * g.node_area());
  return std::pow(s.value(), 1.0 / p);
}

DomainInvarianceReport check_domain_invariance(const SymmetryGroup& g, const Grid& grid) {
  if (g.dim() != grid.dim())
    throw invalid_parameter("group dimension does not match the grid");
  DomainInvarianceReport rep;
  for (std::size_t e = 0; e < g.elements.size(); ++e) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        if (!grid.mask[grid.index(i, j)]) continue;
        const Point p = g.elements[e].apply({grid.node_x(i), grid.node_y(j)});
        double excess = 0.0;
        if (grid.domain) {
          excess = domain_excess(*grid.domain, p.x, p.y);
          if (excess <= kInvarianceTol) continue;
        } else {
          // No continuous domain attached: the image must sit on (or within
          // snap distance of) a masked lattice node.
          int oi, oj;
          if (map_to_lattice(grid, g.elements[e], i, j, oi, oj) &&
              grid.mask[grid.index(oi, oj)])
            continue;
          excess = std::max(grid.hx, grid.hy);
        }
        if (excess > rep.violation) {
          rep.invariant = false;
          rep.violation = excess;
          rep.element = e;
          rep.x = grid.node_x(i);
          rep.y = grid.node_y(j);
        }
      }
  }
  return rep;
}

void require_domain_invariance(const SymmetryGroup& g, const Grid& grid) {
  const DomainInvarianceReport rep = check_domain_invariance(g, grid);
  if (rep.invariant) return;
  std::ostringstream msg;
  msg << "domain is not invariant: element " << rep.element << " moves node ("
      << rep.x << ", " << rep.y << ") outside by " << rep.violation;
  throw invariant_domain_violation(msg.str());
}

GridFunction random_field(GridPtr grid, std::uint64_t seed, int smoothness) {
  if (smoothness < 0) throw invalid_parameter("smoothness must be >= 0");
  GridFunction u = make_zero_field(grid);
  const Grid& g = *u.grid;
  std::mt19937_64 rng(seed);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.interior(i, j)) {
        const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
        u.values[g.index(i, j)] = 2.0 * r - 1.0;
      }
  std::vector<double> next(u.values.size(), 0.0);
  for (int pass = 0; pass < smoothness; ++pass) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!g.interior(i, j)) {
          next[g.index(i, j)] = 0.0;
          continue;
        }
        if (g.dim() == 1) {
          next[g.index(i, 0)] = (2.0 * u.values[g.index(i, 0)] +
                                 u.values[g.index(i - 1, 0)] +
                                 u.values[g.index(i + 1, 0)]) / 4.0;
        } else {
          next[g.index(i, j)] = (4.0 * u.values[g.index(i, j)] +
                                 u.values[g.index(i - 1, j)] +
                                 u.values[g.index(i + 1, j)] +
                                 u.values[g.index(i, j - 1)] +
                                 u.values[g.index(i, j + 1)]) / 8.0;
        }
      }
    u.values.swap(next);
  }
  return u;
}

}  // namespace gavg
