#pragma once

#include <cstddef>
#include <vector>

#include "gavg/field.hpp"
#include "gavg/group.hpp"

namespace gavg {

// Dense row-major matrix, just large enough for minor bookkeeping.
struct DenseMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// A k x n matrix attached to every node; entries are zero off the mask.
struct MatrixField {
  GridPtr grid;
  int k = 2, n = 2;
  std::vector<double> values;  // node-major, row-major per matrix

  double& at(std::size_t node, int r, int c) {
    return values[(node * k + r) * n + c];
  }
  double at(std::size_t node, int r, int c) const {
    return values[(node * k + r) * n + c];
  }
};

MatrixField make_matrix_field(GridPtr grid, int k, int n);
MatrixField random_matrix_field(GridPtr grid, int k, int n, std::uint64_t seed);

struct MeanValueResult {
  GroupElement g_best = GroupElement::identity(1);
  std::size_t best_index = 0;
  double distance = 0.0;  // min over g of the weighted 2-norm of u_G - g.u
};

// Exhaustive search for a single orbit element equal to the average:
// distance near zero certifies the strong mean-value property for this u,
// a large distance is numerical evidence against it.
MeanValueResult mean_value_probe(const GridFunction& u, const SymmetryGroup& g);

// Number of minors of all orders 1..min(k,n) of a k x n matrix:
// sum_s C(k,s)*C(n,s).
long long tau(int k, int n);

// Matrix of all s x s minors: entry (I,J) = det of the submatrix with row
// subset I and column subset J, subsets ordered lexicographically.
// Requires 2 <= s <= min(rows, cols).
DenseMatrix adjugate(const DenseMatrix& xi, int s);

// || adj_s(sum_g w_g Phi_g) - sum_g w_g adj_s(Phi_g) ||_F summed over masked
// nodes, where Phi_g(x) = Phi(gx) * g. Quantifies how far minor-taking fails
// to commute with group averaging.
double polyconvexity_gap(const MatrixField& phi, const SymmetryGroup& g, int s);

struct ContinuityReport {
  double c_max = 0.0;        // max ||g1.v - g2.v||_{1,p} / d(g1,g2)
  double c_mean = 0.0;       // mean of the sampled ratios
  std::size_t pairs = 0;     // pairs actually used
};

// Samples element pairs (deterministic stride over the i<j enumeration) and
// estimates the Lipschitz constant of g -> g.v in the order-1 norm.
ContinuityReport action_continuity_probe(const GridFunction& v, const SymmetryGroup& g,
                                         int pair_samples, double p);

}  // namespace gavg
