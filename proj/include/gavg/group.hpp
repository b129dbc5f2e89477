#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gavg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Orthogonal d x d matrix, d in {1, 2}. Row-major storage; for d == 1 only
// m[0] is used and apply() passes the y coordinate through untouched.
class GroupElement {
 public:
  static GroupElement identity(int dim);
  static GroupElement rotation(double angle);         // 2x2, counterclockwise
  static GroupElement reflection(double axis_angle);  // 2x2, across a line through 0
  static GroupElement scalar1d(double s);             // 1x1

  int dim() const { return dim_; }
  double entry(int r, int c) const { return m_[static_cast<std::size_t>(r) * 2 + c]; }

  GroupElement multiply(const GroupElement& rhs) const;  // this * rhs
  GroupElement transpose() const;
  double determinant() const;
  Point apply(Point p) const;

 private:
  GroupElement() = default;
  int dim_ = 2;
  double m_[4] = {1.0, 0.0, 0.0, 1.0};
};

// Frobenius distance; the bi-invariant metric used everywhere.
double group_distance(const GroupElement& a, const GroupElement& b);

enum class GroupKind { finite, so2_quadrature };

// Element list with Haar weights. The constructors below put the identity
// first and use uniform weights.
struct SymmetryGroup {
  std::vector<GroupElement> elements;
  std::vector<double> weights;
  GroupKind kind = GroupKind::finite;

  std::size_t size() const { return elements.size(); }
  int dim() const { return elements.empty() ? 0 : elements.front().dim(); }
};

SymmetryGroup make_cyclic(int n);              // rotations by 2*pi*k/n
SymmetryGroup make_dihedral(int n);            // n rotations + n reflections
SymmetryGroup make_reflection_1d();            // {[1], [-1]}
SymmetryGroup make_so2_quadrature(int n_nodes);  // uniform angular quadrature = C_n

struct GroupViolation {
  std::string what;   // "orthogonality", "determinant", "weight-positivity",
                      // "weight-normalization", "weight-uniformity",
                      // "closure", "inverse-closure", "structure"
  double magnitude = 0.0;
  std::size_t element = 0;  // offending element index where applicable
};

// Structural checks: orthogonality and |det| = 1 within 1e-12, positive
// uniform weights summing to 1 within 1e-12, closure under products and
// inverses with element matching within 1e-9. Empty result means valid.
std::vector<GroupViolation> verify_group(const SymmetryGroup& g);

}  // namespace gavg
