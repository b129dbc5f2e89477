#include "gavg/group.hpp"

#include <cmath>
#include <limits>

#include "gavg/errors.hpp"

namespace gavg {

namespace {
constexpr double kStructTol = 1e-12;   // orthogonality, determinant, weights
constexpr double kClosureTol = 1e-9;   // entrywise element matching
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

GroupElement GroupElement::identity(int dim) {
  if (dim != 1 && dim != 2) throw invalid_parameter("group element dimension must be 1 or 2");
  GroupElement g;
  g.dim_ = dim;
  return g;
}

GroupElement GroupElement::rotation(double angle) {
  GroupElement g;
  g.dim_ = 2;
  const double c = std::cos(angle), s = std::sin(angle);
  g.m_[0] = c;
  g.m_[1] = -s;
  g.m_[2] = s;
  g.m_[3] = c;
  return g;
}

GroupElement GroupElement::reflection(double axis_angle) {
  GroupElement g;
  g.dim_ = 2;
  const double c = std::cos(2.0 * axis_angle), s = std::sin(2.0 * axis_angle);
  g.m_[0] = c;
  g.m_[1] = s;
  g.m_[2] = s;
  g.m_[3] = -c;
  return g;
}

GroupElement GroupElement::scalar1d(double s) {
  GroupElement g;
  g.dim_ = 1;
  g.m_[0] = s;
  g.m_[1] = g.m_[2] = 0.0;
  g.m_[3] = 1.0;
  return g;
}

GroupElement GroupElement::multiply(const GroupElement& rhs) const {
  if (dim_ != rhs.dim_) throw invalid_parameter("group element dimension mismatch in product");
  GroupElement out;
  out.dim_ = dim_;
  if (dim_ == 1) {
    out.m_[0] = m_[0] * rhs.m_[0];
    out.m_[1] = out.m_[2] = 0.0;
    out.m_[3] = 1.0;
    return out;
  }
  out.m_[0] = m_[0] * rhs.m_[0] + m_[1] * rhs.m_[2];
  out.m_[1] = m_[0] * rhs.m_[1] + m_[1] * rhs.m_[3];
  out.m_[2] = m_[2] * rhs.m_[0] + m_[3] * rhs.m_[2];
  out.m_[3] = m_[2] * rhs.m_[1] + m_[3] * rhs.m_[3];
  return out;
}

GroupElement GroupElement::transpose() const {
  GroupElement out = *this;
  out.m_[1] = m_[2];
  out.m_[2] = m_[1];
  return out;
}

double GroupElement::determinant() const {
  if (dim_ == 1) return m_[0];
  return m_[0] * m_[3] - m_[1] * m_[2];
}

Point GroupElement::apply(Point p) const {
  if (dim_ == 1) return {m_[0] * p.x, p.y};
  return {m_[0] * p.x + m_[1] * p.y, m_[2] * p.x + m_[3] * p.y};
}

double group_distance(const GroupElement& a, const GroupElement& b) {
  if (a.dim() != b.dim()) throw invalid_parameter("group element dimension mismatch in distance");
  double sq = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) {
      const double d = a.entry(r, c) - b.entry(r, c);
      sq += d * d;
    }
  return std::sqrt(sq);
}

SymmetryGroup make_cyclic(int n) {
  if (n < 1) throw invalid_parameter("cyclic group order must be >= 1");
  SymmetryGroup g;
  g.kind = GroupKind::finite;
  const double w = 1.0 / n;
  for (int k = 0; k < n; ++k) {
    g.elements.push_back(k == 0 ? GroupElement::identity(2)
                                : GroupElement::rotation(kTwoPi * k / n));
    g.weights.push_back(w);
  }
  return g;
}

SymmetryGroup make_dihedral(int n) {
  if (n < 1) throw invalid_parameter("dihedral group order parameter must be >= 1");
  SymmetryGroup g;
  g.kind = GroupKind::finite;
  const double w = 1.0 / (2 * n);
  for (int k = 0; k < n; ++k) {
    g.elements.push_back(k == 0 ? GroupElement::identity(2)
                                : GroupElement::rotation(kTwoPi * k / n));
    g.weights.push_back(w);
  }
  // Reflection axes at angles pi*k/n; k = 0 is the x-axis.
  const double kPi = kTwoPi / 2.0;
  for (int k = 0; k < n; ++k) {
    g.elements.push_back(GroupElement::reflection(kPi * k / n));
    g.weights.push_back(w);
  }
  return g;
}

SymmetryGroup make_reflection_1d() {
  SymmetryGroup g;
  g.kind = GroupKind::finite;
  g.elements = {GroupElement::scalar1d(1.0), GroupElement::scalar1d(-1.0)};
  g.weights = {0.5, 0.5};
  return g;
}

SymmetryGroup make_so2_quadrature(int n_nodes) {
  if (n_nodes < 1) throw invalid_parameter("so2 quadrature needs >= 1 node");
  SymmetryGroup g = make_cyclic(n_nodes);
  g.kind = GroupKind::so2_quadrature;
  return g;
}

namespace {

double entrywise_distance(const GroupElement& a, const GroupElement& b) {
  double worst = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c)
      worst = std::max(worst, std::abs(a.entry(r, c) - b.entry(r, c)));
  return worst;
}

// Entrywise distance to the nearest listed element.
double match_distance(const SymmetryGroup& g, const GroupElement& e) {
  double best = std::numeric_limits<double>::infinity();
  for (const GroupElement& h : g.elements) best = std::min(best, entrywise_distance(e, h));
  return best;
}

}  // namespace

std::vector<GroupViolation> verify_group(const SymmetryGroup& g) {
  std::vector<GroupViolation> out;
  const std::size_t n = g.elements.size();
  if (n == 0 || g.weights.size() != n) {
    out.push_back({"structure", static_cast<double>(n ? n : 1), 0});
    return out;
  }
  const int d = g.elements.front().dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (g.elements[i].dim() != d) {
      out.push_back({"structure", 1.0, i});
      return out;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const GroupElement& e = g.elements[i];
    // g^T g = I, entrywise.
    const GroupElement gtg = e.transpose().multiply(e);
    double dev = entrywise_distance(gtg, GroupElement::identity(d));
    if (dev > kStructTol) out.push_back({"orthogonality", dev, i});
    const double ddet = std::abs(std::abs(e.determinant()) - 1.0);
    if (ddet > kStructTol) out.push_back({"determinant", ddet, i});
  }

  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g.weights[i] > 0.0)) out.push_back({"weight-positivity", g.weights[i], i});
    wsum += g.weights[i];
  }
  if (std::abs(wsum - 1.0) > kStructTol)
    out.push_back({"weight-normalization", std::abs(wsum - 1.0), 0});
  const double uniform = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = std::abs(g.weights[i] - uniform);
    if (dev > kStructTol) {
      out.push_back({"weight-uniformity", dev, i});
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dev = match_distance(g, g.elements[i].multiply(g.elements[j]));
      if (dev > kClosureTol) out.push_back({"closure", dev, i});
    }
    const double idev = match_distance(g, g.elements[i].transpose());
    if (idev > kClosureTol) out.push_back({"inverse-closure", idev, i});
  }
  return out;
}

}  // namespace gavg
