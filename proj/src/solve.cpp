#include "gavg/solve.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>

#include "gavg/errors.hpp"
#include "gavg/numeric.hpp"

namespace gavg {

namespace {

double plain_dot(const std::vector<double>& a, const std::vector<double>& b) {
  KahanSum s;
  for (std::size_t k = 0; k < a.size(); ++k) s.add(a[k] * b[k]);
  return s.value();
}

void validate(const MinimizeOptions& o) {
  if (o.max_iters < 1) throw invalid_parameter("max_iters must be >= 1");
  if (!(o.grad_tol > 0.0)) throw invalid_parameter("grad_tol must be > 0");
  if (!(o.shrink > 0.0 && o.shrink < 1.0))
    throw invalid_parameter("shrink factor must lie in (0,1)");
  if (!(o.sufficient_decrease > 0.0 && o.sufficient_decrease < 1.0))
    throw invalid_parameter("sufficient-decrease constant must lie in (0,1)");
  if (o.max_backtracks < 1) throw invalid_parameter("max_backtracks must be >= 1");
}

}  // namespace

MinimizeResult minimize(const EnergyFunctional& e, const GridFunction& u0,
                        const MinimizeOptions& opts) {
  validate(opts);
  if (!e.differentiable())
    throw invalid_parameter("minimize needs a differentiable energy (eps > 0 when p < 2)");

  MinimizeResult r;
  r.u_min = u0;
  project_zero_trace(r.u_min);

  double energy = e.eval(r.u_min);
  if (!std::isfinite(energy)) throw divergence_error("non-finite energy at the start");
  GridFunction grad = e.gradient(r.u_min);
  double residual = weighted_norm2(grad);
  if (!std::isfinite(residual)) throw divergence_error("non-finite gradient at the start");

  r.energy_history.push_back(energy);
  r.residual_history.push_back(residual);

  std::vector<double> prev_step;  // s = u_{k} - u_{k-1}
  std::vector<double> prev_grad;  // gradient at u_{k-1}
  GridFunction trial = r.u_min;

  while (residual > opts.grad_tol && r.iterations < opts.max_iters) {
    // Two-point (Barzilai-Borwein) step length, unit step on the first
    // iterate and whenever the curvature estimate is unusable.
    double alpha = 1.0;
    if (!prev_step.empty()) {
      std::vector<double> y(grad.values.size());
      for (std::size_t k = 0; k < y.size(); ++k) y[k] = grad.values[k] - prev_grad[k];
      const double ss = plain_dot(prev_step, prev_step);
      const double sy = plain_dot(prev_step, y);
      if (std::isfinite(sy) && sy > 0.0 && std::isfinite(ss)) {
        alpha = ss / sy;
        if (!(alpha > 1e-14 && alpha < 1e14)) alpha = 1.0;
      }
    }

    const double gg = plain_dot(grad.values, grad.values);
    bool accepted = false;
    double trial_energy = energy;
    for (int h = 0; h <= opts.max_backtracks; ++h) {
      for (std::size_t k = 0; k < trial.values.size(); ++k)
        trial.values[k] = r.u_min.values[k] - alpha * grad.values[k];
      trial_energy = e.eval(trial);
      if (std::isfinite(trial_energy) &&
          trial_energy <= energy - opts.sufficient_decrease * alpha * gg) {
        accepted = true;
        break;
      }
      alpha *= opts.shrink;
    }
    if (!accepted) break;  // no further decrease is possible at this scale

    prev_step.resize(grad.values.size());
    for (std::size_t k = 0; k < prev_step.size(); ++k)
      prev_step[k] = -alpha * grad.values[k];
    prev_grad = grad.values;

    r.u_min.values.swap(trial.values);
    energy = trial_energy;
    if (energy < opts.energy_floor)
      throw divergence_error("energy fell below the divergence floor");

    grad = e.gradient(r.u_min);
    residual = weighted_norm2(grad);
    if (!std::isfinite(residual)) throw divergence_error("non-finite gradient");

    ++r.iterations;
    r.energy_history.push_back(energy);
    r.residual_history.push_back(residual);
  }

  r.energy = energy;
  r.residual = residual;
  r.converged = residual <= opts.grad_tol;
  return r;
}

GridFunction direct_poisson_solve(GridPtr grid, double rhs_constant) {
  const Grid& g = *grid;
  // Degrees of freedom: interior nodes, in row-major node order.
  std::vector<int> dof(g.num_nodes(), -1);
  int ndof = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.interior(i, j)) dof[g.index(i, j)] = ndof++;
  if (ndof == 0) throw invalid_parameter("direct_poisson_solve: grid has no interior nodes");

  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = g.dim() == 2 ? 1.0 / (g.hy * g.hy) : 0.0;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(ndof) * 5);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int row = dof[g.index(i, j)];
      if (row < 0) continue;
      const double diag = g.dim() == 1 ? 2.0 * ihx2 : 2.0 * (ihx2 + ihy2);
      trips.emplace_back(row, row, diag);
      auto couple = [&](int ni, int nj, double coeff) {
        if (!g.in_lattice(ni, nj)) return;
        const int col = dof[g.index(ni, nj)];
        if (col >= 0) trips.emplace_back(row, col, -coeff);
      };
      couple(i - 1, j, ihx2);
      couple(i + 1, j, ihx2);
      if (g.dim() == 2) {
        couple(i, j - 1, ihy2);
        couple(i, j + 1, ihy2);
      }
    }

  Eigen::SparseMatrix<double> a(ndof, ndof);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd b = Eigen::VectorXd::Constant(ndof, rhs_constant);

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(a);
  if (llt.info() != Eigen::Success)
    throw invalid_parameter("direct_poisson_solve: factorization failed");
  Eigen::VectorXd x = llt.solve(b);
  // One refinement pass, then verify the residual honestly.
  x += llt.solve(b - a * x);
  const double res = (b - a * x).lpNorm<Eigen::Infinity>();
  if (!(res <= 1e-12 * (1.0 + std::abs(rhs_constant)))) {
    std::ostringstream msg;
    msg << "direct_poisson_solve: residual " << res << " exceeds tolerance";
    throw divergence_error(msg.str());
  }

  GridFunction u = make_zero_field(grid);
  for (std::size_t idx = 0; idx < dof.size(); ++idx)
    if (dof[idx] >= 0) u.values[idx] = x[dof[idx]];
  return u;
}

SymmetrizeResult symmetrize_and_polish(const EnergyFunctional& e,
                                       const SymmetryGroup& g,
                                       const GridFunction& u0,
                                       const MinimizeOptions& opts) {
  require_domain_invariance(g, *u0.grid);
  // The workflow only makes sense for a group-invariant energy; probe with a
  // deterministic rough field (catches interpolated actions, whose energy
  // invariance fails at discretization scale).
  const GridFunction probe = random_field(u0.grid, 0x5eed, 1);
  for (const GridFunction* w : {&probe, &u0}) {
    const InvarianceReport inv = check_invariance(e, g, *w);
    if (inv.max_rel > 1e-10) {
      std::ostringstream msg;
      msg << "energy is not invariant under the group: relative deviation "
          << inv.max_rel << " at element " << inv.element;
      throw not_invariant_error(msg.str());
    }
  }

  SymmetrizeResult out;
  out.raw = minimize(e, u0, opts);
  out.averaged = g_average(out.raw.u_min, g);
  out.report = make_average_report(e, out.raw.u_min, g);
  out.polished = minimize(e, out.averaged, opts);
  return out;
}

}  // namespace gavg
