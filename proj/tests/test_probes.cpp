#include <doctest.h>

#include <cmath>
#include <memory>

#include "gavg/errors.hpp"
#include "gavg/field.hpp"
#include "gavg/group.hpp"
#include "gavg/probes.hpp"

using namespace gavg;

TEST_CASE("tau counts minors of all orders") {
  CHECK(tau(1, 1) == 1);
  CHECK(tau(1, 5) == 5);
  CHECK(tau(2, 2) == 5);    // 4 entries + 1 determinant
  CHECK(tau(2, 3) == 9);    // 6 entries + 3 2x2 minors
  CHECK(tau(3, 3) == 19);   // 9 + 9 + 1
  CHECK_THROWS_AS(tau(0, 2), invalid_parameter);
  CHECK_THROWS_AS(tau(2, -1), invalid_parameter);
}

TEST_CASE("second-order minors of a 2x2 matrix collapse to its determinant") {
  DenseMatrix m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = 2.0;
  m.at(1, 0) = 3.0;
  m.at(1, 1) = 4.0;
  const DenseMatrix a = adjugate(m, 2);
  REQUIRE(a.rows == 1);
  REQUIRE(a.cols == 1);
  CHECK(a.at(0, 0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("minor matrices of the identity are identities") {
  DenseMatrix id3(3, 3);
  for (int i = 0; i < 3; ++i) id3.at(i, i) = 1.0;

  const DenseMatrix a2 = adjugate(id3, 2);  // C(3,2) = 3 subsets per side
  REQUIRE(a2.rows == 3);
  REQUIRE(a2.cols == 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(a2.at(r, c) == (r == c ? 1.0 : 0.0));

  const DenseMatrix a3 = adjugate(id3, 3);
  REQUIRE(a3.rows == 1);
  CHECK(a3.at(0, 0) == 1.0);
}

TEST_CASE("rectangular minors enumerate row subsets lexicographically") {
  // 3x2 matrix with rows (1,0), (0,1), (1,1): the three 2x2 minors are the
  // dets of row pairs {0,1}, {0,2}, {1,2} = 1, 1, -1.
  DenseMatrix m(3, 2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  m.at(2, 0) = 1.0;
  m.at(2, 1) = 1.0;
  const DenseMatrix a = adjugate(m, 2);
  REQUIRE(a.rows == 3);
  REQUIRE(a.cols == 1);
  CHECK(a.at(0, 0) == doctest::Approx(1.0));
  CHECK(a.at(1, 0) == doctest::Approx(1.0));
  CHECK(a.at(2, 0) == doctest::Approx(-1.0));
}

TEST_CASE("adjugate validates the minor order") {
  DenseMatrix m(2, 2);
  CHECK_THROWS_AS(adjugate(m, 1), invalid_parameter);
  CHECK_THROWS_AS(adjugate(m, 3), invalid_parameter);
}

TEST_CASE("mean value probe finds the hand-computed distance on two nodes") {
  // Two nodes at +-1/2 with h = 1, u = (1, 0). Reflection swaps the nodes,
  // the average is (1/2, 1/2), and both orbit elements sit at distance
  // sqrt(1/4 + 1/4) = sqrt(1/2) from it.
  Grid g;
  g.nx = 2;
  g.ny = 1;
  g.hx = 1.0;
  g.ox = -0.5;
  g.mask = {1, 1};
  GridFunction u{std::make_shared<const Grid>(g), {1.0, 0.0}};
  const MeanValueResult r = mean_value_probe(u, make_reflection_1d());
  CHECK(r.distance == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(r.best_index == 0);  // ties resolve to the first element
}

TEST_CASE("mean value distance vanishes on symmetric fields") {
  const GridPtr g = make_grid({DomainKind::interval}, 17);
  GridFunction u = make_zero_field(g);
  for (int i = 0; i < g->nx; ++i) {
    const double x = g->node_x(i);
    u.values[i] = (1.0 - x * x);
  }
  const MeanValueResult r = mean_value_probe(u, make_reflection_1d());
  CHECK(r.distance == 0.0);
  CHECK(r.best_index == 0);
}

TEST_CASE("matrix fields are zero off the mask and deterministic") {
  const GridPtr g = make_grid({DomainKind::disk}, 9);
  const MatrixField a = random_matrix_field(g, 2, 2, 7);
  const MatrixField b = random_matrix_field(g, 2, 2, 7);
  CHECK(a.values == b.values);
  for (std::size_t node = 0; node < g->num_nodes(); ++node)
    if (!g->mask[node])
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(a.at(node, r, c) == 0.0);
}

TEST_CASE("minor-taking does not commute with averaging over the sign flip") {
  // Phi == identity everywhere; under g = -I the transformed field is -I, so
  // the average is 0 with det 0, while the averaged dets stay 1. Each masked
  // node contributes exactly 1 to the gap.
  const GridPtr g = make_grid({DomainKind::square}, 5);
  MatrixField phi = make_matrix_field(g, 2, 2);
  for (std::size_t node = 0; node < g->num_nodes(); ++node)
    if (g->mask[node]) {
      phi.at(node, 0, 0) = 1.0;
      phi.at(node, 1, 1) = 1.0;
    }
  const double gap = polyconvexity_gap(phi, make_cyclic(2), 2);
  CHECK(gap == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("the polyconvexity gap vanishes for the trivial group") {
  const GridPtr g = make_grid({DomainKind::disk}, 9);
  const MatrixField phi = random_matrix_field(g, 2, 2, 3);
  CHECK(polyconvexity_gap(phi, make_cyclic(1), 2) == 0.0);
}

TEST_CASE("the polyconvexity probe validates shapes") {
  const GridPtr g = make_grid({DomainKind::square}, 9);
  const MatrixField wide = random_matrix_field(g, 2, 3, 1);
  CHECK_THROWS_AS(polyconvexity_gap(wide, make_cyclic(4), 2), invalid_parameter);
  const MatrixField ok = random_matrix_field(g, 3, 2, 1);
  CHECK_THROWS_AS(polyconvexity_gap(ok, make_cyclic(4), 3), invalid_parameter);
  CHECK(polyconvexity_gap(ok, make_cyclic(4), 2) >= 0.0);
}

TEST_CASE("the continuity probe reports finite ratios and pair counts") {
  const GridPtr g = make_grid({DomainKind::disk}, 17);
  const GridFunction v = random_field(g, 10, 4);
  const ContinuityReport r = action_continuity_probe(v, make_so2_quadrature(16), 32, 2.0);
  CHECK(r.pairs > 0);
  CHECK(r.pairs <= 32);
  CHECK(std::isfinite(r.c_max));
  CHECK(r.c_max >= r.c_mean);
  CHECK(r.c_mean > 0.0);
}

TEST_CASE("the continuity probe needs at least two elements") {
  const GridPtr g = make_grid({DomainKind::disk}, 9);
  const GridFunction v = random_field(g, 1, 2);
  CHECK_THROWS_AS(action_continuity_probe(v, make_cyclic(1), 8, 2.0), invalid_parameter);
  CHECK_THROWS_AS(action_continuity_probe(v, make_cyclic(4), 0, 2.0), invalid_parameter);
}
