#pragma once

#include "gavg/energy.hpp"
#include "gavg/field.hpp"
#include "gavg/group.hpp"

namespace gavg {

// u_G = sum_g w_g * pullback(g, u): the discrete group average. Zero-trace is
// preserved; the result is a convex combination of the orbit. Per-node terms
// are summed order-independently (sorted, pairwise), so element order never
// changes the result. Throws invariant_domain_violation when the grid's
// domain is not invariant under the group.
GridFunction g_average(const GridFunction& u, const SymmetryGroup& g);

// max over group elements h of ||h.u_G - u_G||_inf, where h.u_G is realized
// through the translation identity sum_g w_g * pullback(g*h, u) with each
// product snapped onto the element list. Bit-zero for any closed element set
// with uniform weights.
double check_average_invariance(const GridFunction& u, const SymmetryGroup& g);

// sum_g w_g F(g.u) - F(u_G); nonnegative (up to roundoff) for convex F.
double jensen_gap(const EnergyFunctional& e, const GridFunction& u,
                  const SymmetryGroup& g);

struct HullNormBound {
  double avg_norm = 0.0;        // order-1 Sobolev norm of u_G
  double max_orbit_norm = 0.0;  // max over g of the norm of g.u
  bool satisfied = false;       // avg_norm <= max_orbit_norm + slack
};

// Checks ||u_G|| <= max_g ||g.u|| in the order-1 norm with exponent p,
// with 1e-12 relative slack.
HullNormBound hull_norm_bound(const GridFunction& u, const SymmetryGroup& g, double p);

// min over g of [F(g.u) - F(u_G) - <grad F(u_G), g.u - u_G>], the worst-case
// first-order convexity bracket at u_G over the orbit. The pairing contracts
// the L2-representer of the differential against the increment, i.e. the
// plain dot of the full partial-derivative field with g.u - u_G. Nonnegative
// (up to roundoff) for convex differentiable F; throws invalid_parameter when
// F is not differentiable.
double subgradient_gap(const EnergyFunctional& e, const GridFunction& u,
                       const SymmetryGroup& g);

struct AverageReport {
  double jensen_gap = 0.0;
  double invariance_residual = 0.0;
  bool norm_bound_satisfied = false;
  double subgradient_min_gap = 0.0;  // NaN when F is not differentiable
};

AverageReport make_average_report(const EnergyFunctional& e, const GridFunction& u,
                                  const SymmetryGroup& g);

}  // namespace gavg
