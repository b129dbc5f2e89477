#include "gavg/energy.hpp"

#include <algorithm>
#include <cmath>

#include "gavg/errors.hpp"
#include "gavg/numeric.hpp"

namespace gavg {

ConcaveNonlinearity ConcaveNonlinearity::zero() { return ConcaveNonlinearity{}; }

ConcaveNonlinearity ConcaveNonlinearity::linear(double lambda) {
  ConcaveNonlinearity nl;
  nl.name = "linear";
  nl.f = [lambda](double s) { return lambda * s; };
  nl.fprime = [lambda](double) { return lambda; };
  return nl;
}

ConcaveNonlinearity ConcaveNonlinearity::quadratic(double a, double b) {
  if (b < 0.0) throw invalid_parameter("quadratic nonlinearity needs b >= 0 for concavity");
  ConcaveNonlinearity nl;
  nl.name = "quadratic";
  nl.f = [a, b](double s) { return a * s - b * s * s; };
  nl.fprime = [a, b](double s) { return a - 2.0 * b * s; };
  return nl;
}

ConcaveNonlinearity ConcaveNonlinearity::negexp() {
  ConcaveNonlinearity nl;
  nl.name = "negexp";
  nl.f = [](double s) { return -std::exp(s); };
  nl.fprime = [](double s) { return -std::exp(s); };
  return nl;
}

double concavity_violation(const ConcaveNonlinearity& nl, double range, int samples) {
  if (samples < 2 || range <= 0.0)
    throw invalid_parameter("concavity check needs range > 0 and samples >= 2");
  double worst = 0.0;
  for (int a = 0; a < samples; ++a)
    for (int b = a; b < samples; ++b) {
      const double s = -range + 2.0 * range * a / (samples - 1);
      const double t = -range + 2.0 * range * b / (samples - 1);
      const double gap = 0.5 * (nl.f(s) + nl.f(t)) - nl.f(0.5 * (s + t));
      worst = std::max(worst, gap);
    }
  return worst;
}

EnergyFunctional EnergyFunctional::make_p_dirichlet(double p, double eps,
                                                    ConcaveNonlinearity nl) {
  if (!(p > 1.0)) throw invalid_parameter("p_dirichlet exponent must satisfy p > 1");
  if (!(eps >= 0.0)) throw invalid_parameter("p_dirichlet regularization must be >= 0");
  EnergyFunctional e;
  e.kind = EnergyKind::p_dirichlet;
  e.p = p;
  e.eps = eps;
  e.nl = std::move(nl);
  return e;
}

EnergyFunctional EnergyFunctional::make_polyharmonic(int m, ConcaveNonlinearity nl) {
  if (m < 1) throw invalid_parameter("polyharmonic order must be >= 1");
  EnergyFunctional e;
  e.kind = EnergyKind::polyharmonic;
  e.m = m;
  e.nl = std::move(nl);
  return e;
}

bool EnergyFunctional::differentiable() const {
  if (kind == EnergyKind::polyharmonic) return true;
  return p >= 2.0 || eps > 0.0;
}

double EnergyFunctional::eval(const GridFunction& u) const {
  const Grid& g = *u.grid;
  KahanSum s;
  if (kind == EnergyKind::p_dirichlet) {
    const double e2 = eps * eps;
    const int cj_end = g.dim() == 1 ? 1 : g.ny - 1;
    for (int cj = 0; cj < cj_end; ++cj)
      for (int ci = 0; ci < g.nx - 1; ++ci) {
        const double q = cell_differences(u, ci, cj).grad_sq;
        s.add((1.0 / p) * std::pow(q + e2, p / 2.0) * g.cell_area());
      }
  } else {
    const std::vector<double> v = laplacian_power(u, m);
    for (double x : v) s.add(0.5 * x * x * g.node_area());
  }
  for (double x : u.values) s.add(-nl.f(x) * g.node_area());
  return s.value();
}

namespace {

// Accumulates the elastic partial derivatives of the p-Dirichlet energy at
// every lattice node. Each node gathers its (<= 4) incident-cell
// contributions in sorted order so the result is a bit-exact permutation of
// itself under any lattice symmetry of the field.
std::vector<double> p_dirichlet_elastic_partials(const EnergyFunctional& e,
                                                 const GridFunction& u) {
  const Grid& g = *u.grid;
  const double e2 = e.eps * e.eps;
  const double half_ca = 0.5 * g.cell_area();

  // Per-cell corner contributions, stored cell-major.
  const int ncx = g.nx - 1;
  const int ncy = g.dim() == 1 ? 1 : g.ny - 1;
  const int corners = g.dim() == 1 ? 2 : 4;
  std::vector<double> contrib(static_cast<std::size_t>(ncx) * ncy * corners, 0.0);
  for (int cj = 0; cj < ncy; ++cj)
    for (int ci = 0; ci < ncx; ++ci) {
      const CellDifferences d = cell_differences(u, ci, cj);
      const double base = d.grad_sq + e2;
      // w = (q + eps^2)^(p/2 - 1); at a kink (base == 0, p < 2) the zero
      // subgradient is the valid stationary choice.
      const double w = base == 0.0 ? 0.0 : std::pow(base, e.p / 2.0 - 1.0);
      double* c = &contrib[(static_cast<std::size_t>(cj) * ncx + ci) * corners];
      if (g.dim() == 1) {
        const double t = half_ca * w * (2.0 * d.dxb / g.hx);
        c[0] = -t;  // left corner
        c[1] = t;   // right corner
      } else {
        const double bx = d.dxb / g.hx, tx = d.dxt / g.hx;
        const double ly = d.dyl / g.hy, ry = d.dyr / g.hy;
        c[0] = half_ca * w * (-bx + -ly);  // (ci,   cj)
        c[1] = half_ca * w * (bx + -ry);   // (ci+1, cj)
        c[2] = half_ca * w * (-tx + ly);   // (ci,   cj+1)
        c[3] = half_ca * w * (tx + ry);    // (ci+1, cj+1)
      }
    }

  std::vector<double> out(g.num_nodes(), 0.0);
  double gather[4];
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int n = 0;
      // Cells incident to node (i,j); corner index of (i,j) within each.
      for (int dj = (g.dim() == 1 ? 0 : -1); dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const int ci = i + di, cj = j + dj;
          if (ci < 0 || ci >= ncx || cj < 0 || cj >= ncy) continue;
          const int corner = g.dim() == 1 ? -di : (-di) + 2 * (-dj);
          gather[n++] = contrib[(static_cast<std::size_t>(cj) * ncx + ci) * corners + corner];
        }
      std::sort(gather, gather + n);
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += gather[k];
      out[g.index(i, j)] = s;
    }
  return out;
}

GridFunction energy_partials(const EnergyFunctional& e, const GridFunction& u) {
  const Grid& g = *u.grid;
  GridFunction out = make_zero_field(u.grid);
  if (e.kind == EnergyKind::p_dirichlet) {
    out.values = p_dirichlet_elastic_partials(e, u);
  } else {
    GridFunction v = make_zero_field(u.grid);
    v.values = laplacian_power(u, e.m);
    // The zero-extended Laplacian is self-adjoint, so the chain rule gives
    // nodearea * Lap^m (Lap^m u).
    out.values = laplacian_power(v, e.m);
    for (double& x : out.values) x *= g.node_area();
  }
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] -= e.nl.fprime(u.values[k]) * g.node_area();
  return out;
}

}  // namespace

GridFunction EnergyFunctional::gradient(const GridFunction& u) const {
  GridFunction out = energy_partials(*this, u);
  const Grid& g = *u.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!g.interior(i, j)) out.values[g.index(i, j)] = 0.0;
  return out;
}

GridFunction EnergyFunctional::gradient_full(const GridFunction& u) const {
  return energy_partials(*this, u);
}

InvarianceReport check_invariance(const EnergyFunctional& e, const SymmetryGroup& g,
                                  const GridFunction& u) {
  InvarianceReport rep;
  const double base = e.eval(u);
  for (std::size_t k = 0; k < g.elements.size(); ++k) {
    const double diff = std::abs(e.eval(pullback(g.elements[k], u)) - base);
    if (diff > rep.max_abs) {
      rep.max_abs = diff;
      rep.element = k;
    }
  }
  rep.max_rel = rep.max_abs / (1.0 + std::abs(base));
  return rep;
}

std::vector<double> check_convexity_segment(const EnergyFunctional& e,
                                            const GridFunction& u,
                                            const GridFunction& v,
                                            const std::vector<double>& t_samples) {
  if (!grids_compatible(*u.grid, *v.grid))
    throw invalid_parameter("convexity check needs compatible grids");
  const double eu = e.eval(u);
  const double ev = e.eval(v);
  GridFunction mix = make_zero_field(u.grid);
  std::vector<double> gaps;
  gaps.reserve(t_samples.size());
  for (double t : t_samples) {
    if (!(t >= 0.0 && t <= 1.0))
      throw invalid_parameter("convexity samples must lie in [0,1]");
    for (std::size_t n = 0; n < mix.values.size(); ++n)
      mix.values[n] = t * u.values[n] + (1.0 - t) * v.values[n];
    gaps.push_back(t * eu + (1.0 - t) * ev - e.eval(mix));
  }
  return gaps;
}

}  // namespace gavg
