#include "gavg/average.hpp"

#include <cmath>
#include <limits>

#include "gavg/errors.hpp"
#include "gavg/numeric.hpp"

namespace gavg {

namespace {

// Entrywise distance between two elements of equal dimension.
double element_distance(const GroupElement& a, const GroupElement& b) {
  double d = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c)
      d = std::max(d, std::abs(a.entry(r, c) - b.entry(r, c)));
  return d;
}

// Index of the stored element closest to e, or -1 when none is within tol.
int find_element(const SymmetryGroup& g, const GroupElement& e, double tol) {
  int best = -1;
  double best_d = tol;
  for (std::size_t k = 0; k < g.elements.size(); ++k) {
    const double d = element_distance(g.elements[k], e);
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

GridFunction weighted_orbit_sum(const std::vector<const GridFunction*>& pulls,
                                const SymmetryGroup& g) {
  GridFunction out = make_zero_field(pulls[0]->grid);
  const Grid& grid = *out.grid;
  std::vector<double> terms(pulls.size());
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
    if (!grid.mask[idx]) continue;
    for (std::size_t k = 0; k < pulls.size(); ++k)
      terms[k] = g.weights[k] * pulls[k]->values[idx];
    out.values[idx] = order_independent_sum(terms);
  }
  return out;
}

std::vector<GridFunction> orbit(const GridFunction& u, const SymmetryGroup& g) {
  std::vector<GridFunction> pulls;
  pulls.reserve(g.size());
  for (const GroupElement& e : g.elements) pulls.push_back(pullback(e, u));
  return pulls;
}

}  // namespace

GridFunction g_average(const GridFunction& u, const SymmetryGroup& g) {
  require_domain_invariance(g, *u.grid);
  const std::vector<GridFunction> pulls = orbit(u, g);
  std::vector<const GridFunction*> ptrs;
  for (const GridFunction& p : pulls) ptrs.push_back(&p);
  return weighted_orbit_sum(ptrs, g);
}

double check_average_invariance(const GridFunction& u, const SymmetryGroup& g) {
  require_domain_invariance(g, *u.grid);
  const std::vector<GridFunction> pulls = orbit(u, g);
  std::vector<const GridFunction*> ptrs;
  for (const GridFunction& p : pulls) ptrs.push_back(&p);
  const GridFunction ug = weighted_orbit_sum(ptrs, g);

  double worst = 0.0;
  for (std::size_t h = 0; h < g.size(); ++h) {
    // h.u_G = sum_k w_k pullback(g_k * g_h, u): the translation identity.
    // Products of stored elements snap back onto the list (group closure),
    // reusing the already computed orbit.
    std::vector<GridFunction> fresh;
    fresh.reserve(g.size());  // pointers into `fresh` must stay valid
    std::vector<const GridFunction*> translated(g.size(), nullptr);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const GroupElement prod = g.elements[k].multiply(g.elements[h]);
      const int snap = find_element(g, prod, 1e-9);
      if (snap >= 0) {
        translated[k] = ptrs[snap];
      } else {
        fresh.push_back(pullback(prod, u));
        translated[k] = &fresh.back();
      }
    }
    const GridFunction moved = weighted_orbit_sum(translated, g);
    for (std::size_t idx = 0; idx < ug.values.size(); ++idx)
      worst = std::max(worst, std::abs(moved.values[idx] - ug.values[idx]));
  }
  return worst;
}

double jensen_gap(const EnergyFunctional& e, const GridFunction& u,
                  const SymmetryGroup& g) {
  const GridFunction ug = g_average(u, g);
  KahanSum s;
  for (std::size_t k = 0; k < g.size(); ++k)
    s.add(g.weights[k] * e.eval(pullback(g.elements[k], u)));
  return s.value() - e.eval(ug);
}

HullNormBound hull_norm_bound(const GridFunction& u, const SymmetryGroup& g, double p) {
  const GridFunction ug = g_average(u, g);
  HullNormBound b;
  b.avg_norm = sobolev_norm(ug, p, 1);
  for (const GroupElement& e : g.elements)
    b.max_orbit_norm = std::max(b.max_orbit_norm, sobolev_norm(pullback(e, u), p, 1));
  b.satisfied = b.avg_norm <= b.max_orbit_norm + 1e-12 * (1.0 + b.max_orbit_norm);
  return b;
}

double subgradient_gap(const EnergyFunctional& e, const GridFunction& u,
                       const SymmetryGroup& g) {
  if (!e.differentiable())
    throw invalid_parameter(
        "subgradient gap needs a differentiable energy (use eps > 0 when p < 2)");
  const GridFunction ug = g_average(u, g);
  const GridFunction grad = e.gradient_full(ug);
  const double f_ug = e.eval(ug);
  double best = std::numeric_limits<double>::infinity();
  for (const GroupElement& el : g.elements) {
    const GridFunction v = pullback(el, u);
    // <representer, v - ug> under the nodearea pairing = plain dot of the
    // partial-derivative field with the increment.
    KahanSum lin;
    for (std::size_t k = 0; k < v.values.size(); ++k)
      lin.add(grad.values[k] * (v.values[k] - ug.values[k]));
    best = std::min(best, e.eval(v) - f_ug - lin.value());
  }
  return best;
}

AverageReport make_average_report(const EnergyFunctional& e, const GridFunction& u,
                                  const SymmetryGroup& g) {
  AverageReport rep;
  rep.jensen_gap = jensen_gap(e, u, g);
  rep.invariance_residual = check_average_invariance(u, g);
  rep.norm_bound_satisfied = hull_norm_bound(u, g, e.norm_exponent()).satisfied;
  rep.subgradient_min_gap = e.differentiable()
                                ? subgradient_gap(e, u, g)
                                : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

}  // namespace gavg
