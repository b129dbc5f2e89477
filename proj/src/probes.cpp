#include "gavg/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gavg/average.hpp"
#include "gavg/errors.hpp"
#include "gavg/numeric.hpp"

namespace gavg {

MatrixField make_matrix_field(GridPtr grid, int k, int n) {
  if (k < 2 || k > 3 || n < 2 || n > 3)
    throw invalid_parameter("matrix fields support shapes in {2,3} x {2,3}");
  MatrixField f;
  f.k = k;
  f.n = n;
  f.values.assign(grid->num_nodes() * static_cast<std::size_t>(k) * n, 0.0);
  f.grid = std::move(grid);
  return f;
}

MatrixField random_matrix_field(GridPtr grid, int k, int n, std::uint64_t seed) {
  MatrixField f = make_matrix_field(std::move(grid), k, n);
  const Grid& g = *f.grid;
  std::mt19937_64 rng(seed);
  for (std::size_t node = 0; node < g.num_nodes(); ++node) {
    if (!g.mask[node]) {
      rng.discard(static_cast<unsigned long long>(k) * n);
      continue;
    }
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < n; ++c)
        f.at(node, r, c) = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  }
  return f;
}

MeanValueResult mean_value_probe(const GridFunction& u, const SymmetryGroup& g) {
  const GridFunction ug = g_average(u, g);
  MeanValueResult best;
  best.g_best = g.elements[0];
  best.distance = std::numeric_limits<double>::infinity();
  GridFunction diff = make_zero_field(u.grid);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const GridFunction pulled = pullback(g.elements[k], u);
    for (std::size_t idx = 0; idx < diff.values.size(); ++idx)
      diff.values[idx] = ug.values[idx] - pulled.values[idx];
    const double d = weighted_norm2(diff);
    if (d < best.distance) {
      best.distance = d;
      best.best_index = k;
      best.g_best = g.elements[k];
    }
  }
  return best;
}

namespace {

long long binomial(int n, int s) {
  if (s < 0 || s > n) return 0;
  long long r = 1;
  for (int i = 1; i <= s; ++i) r = r * (n - s + i) / i;
  return r;
}

// All size-s subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int s) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(s);
  for (int i = 0; i < s; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = s - 1;
    while (i >= 0 && cur[i] == n - s + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < s; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

double small_det(const DenseMatrix& m) {
  if (m.rows == 1) return m.at(0, 0);
  if (m.rows == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
         m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
         m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

}  // namespace

long long tau(int k, int n) {
  if (k < 1 || n < 1) throw invalid_parameter("tau needs positive dimensions");
  long long total = 0;
  for (int s = 1; s <= std::min(k, n); ++s) total += binomial(k, s) * binomial(n, s);
  return total;
}

DenseMatrix adjugate(const DenseMatrix& xi, int s) {
  if (s < 2 || s > std::min(xi.rows, xi.cols))
    throw invalid_parameter("adjugate order must satisfy 2 <= s <= min(rows, cols)");
  const std::vector<std::vector<int>> row_sets = subsets(xi.rows, s);
  const std::vector<std::vector<int>> col_sets = subsets(xi.cols, s);
  DenseMatrix out(static_cast<int>(row_sets.size()), static_cast<int>(col_sets.size()));
  DenseMatrix sub(s, s);
  for (std::size_t ri = 0; ri < row_sets.size(); ++ri)
    for (std::size_t ci = 0; ci < col_sets.size(); ++ci) {
      for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c)
          sub.at(r, c) = xi.at(row_sets[ri][r], col_sets[ci][c]);
      out.at(static_cast<int>(ri), static_cast<int>(ci)) = small_det(sub);
    }
  return out;
}

namespace {

// Phi_g(x) = Phi(g x) * g: each scalar entry pulled back through the group
// element, then a node-wise right multiplication by g's matrix.
MatrixField transform_matrix_field(const MatrixField& phi, const GroupElement& g) {
  MatrixField out = make_matrix_field(phi.grid, phi.k, phi.n);
  const Grid& grid = *phi.grid;
  // Pull back entry by entry.
  GridFunction entry = make_zero_field(phi.grid);
  MatrixField pulled = make_matrix_field(phi.grid, phi.k, phi.n);
  for (int r = 0; r < phi.k; ++r)
    for (int c = 0; c < phi.n; ++c) {
      for (std::size_t node = 0; node < grid.num_nodes(); ++node)
        entry.values[node] = phi.at(node, r, c);
      const GridFunction moved = pullback(g, entry);
      for (std::size_t node = 0; node < grid.num_nodes(); ++node)
        pulled.at(node, r, c) = moved.values[node];
    }
  for (std::size_t node = 0; node < grid.num_nodes(); ++node) {
    if (!grid.mask[node]) continue;
    for (int r = 0; r < phi.k; ++r)
      for (int c = 0; c < phi.n; ++c) {
        double s = 0.0;
        for (int t = 0; t < phi.n; ++t) s += pulled.at(node, r, t) * g.entry(t, c);
        out.at(node, r, c) = s;
      }
  }
  return out;
}

}  // namespace

double polyconvexity_gap(const MatrixField& phi, const SymmetryGroup& g, int s) {
  if (phi.n != g.dim())
    throw invalid_parameter("matrix field column count must match the group dimension");
  if (s < 2 || s > std::min(phi.k, phi.n))
    throw invalid_parameter("adjugate order must satisfy 2 <= s <= min(k, n)");
  require_domain_invariance(g, *phi.grid);
  const Grid& grid = *phi.grid;

  std::vector<MatrixField> orbit;
  orbit.reserve(g.size());
  for (const GroupElement& e : g.elements) orbit.push_back(transform_matrix_field(phi, e));

  KahanSum total;
  DenseMatrix avg(phi.k, phi.n);
  DenseMatrix member(phi.k, phi.n);
  for (std::size_t node = 0; node < grid.num_nodes(); ++node) {
    if (!grid.mask[node]) continue;
    std::fill(avg.a.begin(), avg.a.end(), 0.0);
    DenseMatrix avg_adj;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      for (int r = 0; r < phi.k; ++r)
        for (int c = 0; c < phi.n; ++c) {
          member.at(r, c) = orbit[k].at(node, r, c);
          avg.at(r, c) += g.weights[k] * member.at(r, c);
        }
      DenseMatrix adj = adjugate(member, s);
      if (avg_adj.a.empty()) avg_adj = DenseMatrix(adj.rows, adj.cols);
      for (std::size_t t = 0; t < adj.a.size(); ++t)
        avg_adj.a[t] += g.weights[k] * adj.a[t];
    }
    const DenseMatrix adj_of_avg = adjugate(avg, s);
    double fro2 = 0.0;
    for (std::size_t t = 0; t < adj_of_avg.a.size(); ++t) {
      const double d = adj_of_avg.a[t] - avg_adj.a[t];
      fro2 += d * d;
    }
    total.add(std::sqrt(fro2));
  }
  return total.value();
}

ContinuityReport action_continuity_probe(const GridFunction& v, const SymmetryGroup& g,
                                         int pair_samples, double p) {
  if (g.size() < 2)
    throw invalid_parameter("continuity probe needs a group with at least 2 elements");
  if (pair_samples < 1) throw invalid_parameter("pair_samples must be >= 1");

  std::vector<GridFunction> orbit;
  orbit.reserve(g.size());
  for (const GroupElement& e : g.elements) orbit.push_back(pullback(e, v));

  std::vector<std::pair<std::size_t, std::size_t>> all_pairs;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) all_pairs.emplace_back(i, j);

  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  if (static_cast<std::size_t>(pair_samples) >= all_pairs.size()) {
    chosen = all_pairs;
  } else {
    for (int t = 0; t < pair_samples; ++t)
      chosen.push_back(all_pairs[static_cast<std::size_t>(t) * all_pairs.size() / pair_samples]);
  }

  ContinuityReport rep;
  GridFunction diff = make_zero_field(v.grid);
  KahanSum mean;
  for (const auto& [i, j] : chosen) {
    const double d = group_distance(g.elements[i], g.elements[j]);
    if (d <= 1e-12) continue;  // coincident elements carry no information
    for (std::size_t idx = 0; idx < diff.values.size(); ++idx)
      diff.values[idx] = orbit[i].values[idx] - orbit[j].values[idx];
    const double ratio = sobolev_norm(diff, p, 1) / d;
    rep.c_max = std::max(rep.c_max, ratio);
    mean.add(ratio);
    ++rep.pairs;
  }
  if (rep.pairs > 0) rep.c_mean = mean.value() / static_cast<double>(rep.pairs);
  return rep;
}

}  // namespace gavg
