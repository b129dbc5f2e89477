#pragma once

#include <functional>
#include <string>

#include "gavg/field.hpp"
#include "gavg/group.hpp"

namespace gavg {

// Concave source term f(s); energies subtract its node integral.
struct ConcaveNonlinearity {
  std::string name = "zero";
  std::function<double(double)> f = [](double) { return 0.0; };
  std::function<double(double)> fprime = [](double) { return 0.0; };

  static ConcaveNonlinearity zero();
  static ConcaveNonlinearity linear(double lambda);             // lambda*s
  static ConcaveNonlinearity quadratic(double a, double b);     // a*s - b*s^2, b >= 0
  static ConcaveNonlinearity negexp();                          // -exp(s)
};

// Largest sampled midpoint-concavity violation of f on [-range, range];
// 0 means no violation was observed.
double concavity_violation(const ConcaveNonlinearity& nl, double range, int samples);

enum class EnergyKind { p_dirichlet, polyharmonic };

// E(u) = elastic part - sum_nodes f(u) * nodearea, where the elastic part is
//   p_dirichlet:  sum_cells (1/p) * (|grad u|^2_cell + eps^2)^(p/2) * cellarea
//   polyharmonic: sum_nodes (1/2) * (Lap^m u)^2 * nodearea
// Sums run over every lattice cell/node; mask-false values are pinned to 0.
struct EnergyFunctional {
  EnergyKind kind = EnergyKind::p_dirichlet;
  double p = 2.0;       // p_dirichlet exponent, > 1
  double eps = 0.0;     // p_dirichlet regularization, >= 0
  int m = 1;            // polyharmonic Laplacian power, >= 1
  ConcaveNonlinearity nl;

  static EnergyFunctional make_p_dirichlet(double p, double eps, ConcaveNonlinearity nl);
  static EnergyFunctional make_polyharmonic(int m, ConcaveNonlinearity nl);

  // False only for p < 2 with eps == 0 (the kink of q^(p/2) at q = 0).
  bool differentiable() const;
  // Norm the functional is naturally paired with: (order, exponent).
  int norm_order() const { return kind == EnergyKind::p_dirichlet ? 1 : 2 * m; }
  double norm_exponent() const { return kind == EnergyKind::p_dirichlet ? p : 2.0; }

  double eval(const GridFunction& u) const;
  // Partial derivatives at interior nodes, zero elsewhere (the gradient over
  // the zero-trace degrees of freedom).
  GridFunction gradient(const GridFunction& u) const;
  // Partial derivatives at every lattice node; the true gradient of eval as a
  // function of all node values.
  GridFunction gradient_full(const GridFunction& u) const;
};

struct InvarianceReport {
  double max_abs = 0.0;      // worst |E(g.u) - E(u)|
  double max_rel = 0.0;      // worst |E(g.u) - E(u)| / (1 + |E(u)|)
  std::size_t element = 0;   // element attaining the worst violation
};

// Measures how far E fails to be invariant under the group action on u.
InvarianceReport check_invariance(const EnergyFunctional& e, const SymmetryGroup& g,
                                  const GridFunction& u);

// Per-sample convexity gaps t*E(u) + (1-t)*E(v) - E(t*u + (1-t)*v) along the
// segment; every gap is nonnegative (up to roundoff) since E is convex.
std::vector<double> check_convexity_segment(const EnergyFunctional& e,
                                            const GridFunction& u,
                                            const GridFunction& v,
                                            const std::vector<double>& t_samples);

}  // namespace gavg
