#pragma once

#include <cstdint>
#include <vector>

#include "gavg/average.hpp"
#include "gavg/energy.hpp"
#include "gavg/field.hpp"
#include "gavg/group.hpp"

namespace gavg {

struct MinimizeOptions {
  int max_iters = 5000;
  double grad_tol = 1e-8;             // on the nodearea-weighted gradient 2-norm
  double shrink = 0.5;                // backtracking step shrink factor
  double sufficient_decrease = 1e-4;  // Armijo constant
  int max_backtracks = 80;
  double energy_floor = -1e12;        // below this the run counts as divergent
  std::uint64_t seed = 0;             // reserved for randomized restarts; unused
                                      // by the deterministic built-in scheme
};

struct MinimizeResult {
  GridFunction u_min;
  double energy = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> energy_history;    // energy at iterate 0..iterations
  std::vector<double> residual_history;  // residual at iterate 0..iterations
  bool converged = false;
};

// Two-point adaptive-step gradient descent with Armijo backtracking over the
// zero-trace degrees of freedom. energy_history is exactly nonincreasing.
// Throws invalid_parameter for non-differentiable F or bad options;
// divergence_error on non-finite energy or energy below the floor.
MinimizeResult minimize(const EnergyFunctional& e, const GridFunction& u0,
                        const MinimizeOptions& opts = {});

// Solves -Lap_h u = rhs_constant with zero values outside the interior, via a
// sparse Cholesky factorization; the linear-system residual is verified to
// 1e-12. The p=2, linear-f oracle for minimize.
GridFunction direct_poisson_solve(GridPtr grid, double rhs_constant);

struct SymmetrizeResult {
  MinimizeResult raw;
  GridFunction averaged;
  MinimizeResult polished;
  AverageReport report;
};

// Minimize from u0, group-average the minimizer, re-minimize from the
// average. Requires the domain to be group-invariant and the energy to be
// group-invariant (checked on a deterministic probe field to 1e-10 relative;
// not_invariant_error otherwise — interpolated actions fail this gate).
SymmetrizeResult symmetrize_and_polish(const EnergyFunctional& e,
                                       const SymmetryGroup& g,
                                       const GridFunction& u0,
                                       const MinimizeOptions& opts = {});

}  // namespace gavg
