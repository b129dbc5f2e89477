#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gavg/energy.hpp"
#include "gavg/field.hpp"
#include "gavg/group.hpp"

namespace gavg {

// "interval" | "square" | "disk" | "annulus:<r0>" | "polygon:<k>"
DomainSpec parse_domain_spec(const std::string& s);

// "cyclic:<n>" | "dihedral:<n>" | "reflect1d" | "so2:<N>"
SymmetryGroup parse_group_spec(const std::string& s);

// "linear:<lambda>" | "quadratic:<a>,<b>" | "negexp"
ConcaveNonlinearity parse_nonlinearity_spec(const std::string& s);

// "plaplace:p=<p>[,eps=<eps>]" | "polyharmonic:m=<m>"; eps defaults to 1e-8.
EnergyFunctional parse_functional_spec(const std::string& s, ConcaveNonlinearity nl);

// Flat "key = value" lines; '#' starts a comment; blank lines ignored.
// Returns pairs in file order; malformed lines throw parse_error.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace gavg
