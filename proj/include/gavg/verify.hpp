#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gavg/energy.hpp"
#include "gavg/field.hpp"
#include "gavg/group.hpp"

namespace gavg {

struct VerifyCheck {
  std::string name;
  double worst = 0.0;      // largest observed violation magnitude
  double tolerance = 0.0;  // pass iff worst <= tolerance
  bool pass = true;
  bool gating = true;      // informational checks don't affect all_pass
};

struct VerifySuiteReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = true;
};

struct VerifyOptions {
  DomainSpec domain;
  int resolution = 17;
  SymmetryGroup group;
  EnergyFunctional functional;
  std::uint64_t seed = 1;
  int num_fields = 8;  // random fields per property
};

// Runs every module's invariant checks at their stated tolerances for one
// domain/group/functional configuration. Checks on interpolation paths (the
// group is not grid-exact) are reported but not gating, except the ones that
// hold for any convex combination (Jensen, subgradient, hull bound,
// linearity, average invariance).
VerifySuiteReport run_verify_suite(const VerifyOptions& opts);

}  // namespace gavg
