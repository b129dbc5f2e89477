#include <doctest.h>

#include <cmath>
#include <limits>

#include "gavg/average.hpp"
#include "gavg/energy.hpp"
#include "gavg/errors.hpp"
#include "gavg/field.hpp"
#include "gavg/group.hpp"
#include "gavg/solve.hpp"

using namespace gavg;

TEST_CASE("direct solve on the 3-node interval hits the closed form") {
  // -u'' = 1 on one interior node with h = 1: 2*u0 = 1, u0 = 1/2.
  const GridPtr g = make_grid({DomainKind::interval}, 3);
  const GridFunction u = direct_poisson_solve(g, 1.0);
  CHECK(u.at(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u.at(0, 0) == 0.0);
  CHECK(u.at(2, 0) == 0.0);
}

TEST_CASE("1D direct solve converges to the parabola at second order") {
  // -u'' = 1, u(+-1) = 0 has the solution (1 - x^2)/2; the 3-point scheme is
  // exact on quadratics, so agreement is limited only by the linear solver.
  const GridPtr g = make_grid({DomainKind::interval}, 33);
  const GridFunction u = direct_poisson_solve(g, 1.0);
  for (int i = 0; i < g->nx; ++i) {
    const double x = g->node_x(i);
    if (!g->interior(i, 0)) continue;
    CHECK(u.at(i, 0) == doctest::Approx(0.5 * (1.0 - x * x)).epsilon(1e-10));
  }
}

TEST_CASE("direct solve needs at least one interior node") {
  Grid g;
  g.nx = 3;
  g.ny = 1;
  g.hx = 1.0;
  g.ox = -1.0;
  g.mask = {1, 0, 1};  // no node has both neighbors masked
  CHECK_THROWS_AS(direct_poisson_solve(std::make_shared<const Grid>(g), 1.0),
                  invalid_parameter);
}

TEST_CASE("descent matches the direct solver on the quadratic problem") {
  const GridPtr g = make_grid({DomainKind::disk}, 17);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(2.0, 0.0, ConcaveNonlinearity::linear(1.0));
  MinimizeOptions opts;
  opts.grad_tol = 1e-11;
  const MinimizeResult r = minimize(e, random_field(g, 77, 1), opts);
  REQUIRE(r.converged);
  const GridFunction exact = direct_poisson_solve(g, 1.0);
  GridFunction diff = make_zero_field(g);
  for (std::size_t k = 0; k < diff.values.size(); ++k)
    diff.values[k] = r.u_min.values[k] - exact.values[k];
  CHECK(weighted_norm2(diff) <= 1e-8 * (1.0 + weighted_norm2(exact)));
}

TEST_CASE("energy history is monotone and fully recorded") {
  const GridPtr g = make_grid({DomainKind::square}, 17);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(3.0, 0.0, ConcaveNonlinearity::quadratic(1.0, 0.5));
  const MinimizeResult r = minimize(e, random_field(g, 5, 1));
  REQUIRE(r.energy_history.size() == static_cast<std::size_t>(r.iterations) + 1);
  REQUIRE(r.residual_history.size() == r.energy_history.size());
  for (std::size_t k = 1; k < r.energy_history.size(); ++k)
    CHECK(r.energy_history[k] <= r.energy_history[k - 1]);
  CHECK(r.energy == r.energy_history.back());
  CHECK(r.residual == r.residual_history.back());
}

TEST_CASE("the minimizer leaves the zero-trace complement untouched") {
  const GridPtr g = make_grid({DomainKind::disk}, 17);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(2.0, 0.0, ConcaveNonlinearity::linear(1.0));
  const MinimizeResult r = minimize(e, random_field(g, 6, 1));
  for (int j = 0; j < g->ny; ++j)
    for (int i = 0; i < g->nx; ++i)
      if (!g->interior(i, j)) CHECK(r.u_min.at(i, j) == 0.0);
}

TEST_CASE("non-differentiable functionals are rejected up front") {
  const GridPtr g = make_grid({DomainKind::interval}, 9);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(1.5, 0.0, ConcaveNonlinearity::zero());
  CHECK_THROWS_AS(minimize(e, random_field(g, 1, 0)), invalid_parameter);
}

TEST_CASE("option validation rejects nonsense") {
  const GridPtr g = make_grid({DomainKind::interval}, 9);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(2.0, 0.0, ConcaveNonlinearity::zero());
  const GridFunction u = random_field(g, 1, 0);
  MinimizeOptions bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(minimize(e, u, bad), invalid_parameter);
  bad = MinimizeOptions{};
  bad.shrink = 1.0;
  CHECK_THROWS_AS(minimize(e, u, bad), invalid_parameter);
  bad = MinimizeOptions{};
  bad.grad_tol = 0.0;
  CHECK_THROWS_AS(minimize(e, u, bad), invalid_parameter);
}

TEST_CASE("a non-finite start is reported as divergence") {
  const GridPtr g = make_grid({DomainKind::interval}, 9);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(2.0, 0.0, ConcaveNonlinearity::zero());
  GridFunction u = random_field(g, 1, 0);
  u.at(3, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(minimize(e, u), divergence_error);
}

TEST_CASE("crossing the energy floor is reported as divergence") {
  // With f = 1e9 * s the minimum energy is about -1e16, far below the floor.
  const GridPtr g = make_grid({DomainKind::square}, 9);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(2.0, 0.0, ConcaveNonlinearity::linear(1e9));
  CHECK_THROWS_AS(minimize(e, random_field(g, 2, 1)), divergence_error);
}

TEST_CASE("symmetrize and polish improves or preserves the energy") {
  const GridPtr g = make_grid({DomainKind::square}, 17);
  const SymmetryGroup grp = make_dihedral(4);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(3.0, 0.0, ConcaveNonlinearity::quadratic(1.0, 0.5));
  const SymmetrizeResult res = symmetrize_and_polish(e, grp, random_field(g, 99, 1));

  const double e_raw = res.raw.energy;
  const double e_avg = e.eval(res.averaged);
  const double scale = 1.0 + std::abs(e_raw);
  CHECK(e_avg <= e_raw + 1e-10 * scale);           // averaging cannot raise E
  CHECK(res.polished.energy <= e_avg + 1e-14 * scale);  // polish starts there

  // The averaged and polished iterates are exactly symmetric.
  for (const GroupElement& el : grp.elements) {
    const GridFunction moved = pullback(el, res.polished.u_min);
    double worst = 0.0;
    for (std::size_t k = 0; k < moved.values.size(); ++k)
      worst = std::max(worst, std::abs(moved.values[k] - res.polished.u_min.values[k]));
    CHECK(worst <= 1e-10 * (1.0 + sup_norm(res.polished.u_min)));
  }
  CHECK(res.report.norm_bound_satisfied);
}

TEST_CASE("interpolated actions are refused by the invariance gate") {
  const GridPtr g = make_grid({DomainKind::disk}, 17);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(2.0, 0.0, ConcaveNonlinearity::linear(1.0));
  CHECK_THROWS_AS(
      symmetrize_and_polish(e, make_so2_quadrature(16), random_field(g, 1, 1)),
      not_invariant_error);
}

TEST_CASE("domain violations outrank invariance at the symmetrize gate") {
  const GridPtr g = make_grid({DomainKind::square}, 17);
  const EnergyFunctional e =
      EnergyFunctional::make_p_dirichlet(2.0, 0.0, ConcaveNonlinearity::linear(1.0));
  CHECK_THROWS_AS(symmetrize_and_polish(e, make_cyclic(8), random_field(g, 1, 1)),
                  invariant_domain_violation);
}
