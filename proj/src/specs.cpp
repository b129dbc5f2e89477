#include "gavg/specs.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gavg/errors.hpp"

namespace gavg {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Splits "head:rest" (rest may be empty).
std::pair<std::string, std::string> split_head(const std::string& s) {
  const std::size_t c = s.find(':');
  if (c == std::string::npos) return {trim(s), ""};
  return {trim(s.substr(0, c)), trim(s.substr(c + 1))};
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t c = s.find(sep, start);
    if (c == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, c - start)));
    start = c + 1;
  }
}

double parse_number(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end == tok.c_str() || *end != '\0')
    throw parse_error("bad " + what + ": \"" + tok + '"');
  return v;
}

long parse_integer(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (tok.empty() || end == tok.c_str() || *end != '\0')
    throw parse_error("bad " + what + ": \"" + tok + '"');
  return v;
}

}  // namespace

DomainSpec parse_domain_spec(const std::string& s) {
  const auto [head, rest] = split_head(s);
  DomainSpec d;
  if (head == "interval" || head == "square" || head == "disk") {
    if (!rest.empty()) throw parse_error("domain \"" + head + "\" takes no parameter");
    d.kind = head == "interval"  ? DomainKind::interval
             : head == "square" ? DomainKind::square
                                 : DomainKind::disk;
    return d;
  }
  if (head == "annulus") {
    d.kind = DomainKind::annulus;
    d.inner_radius = parse_number(rest, "annulus inner radius");
    if (!(d.inner_radius > 0.0 && d.inner_radius < 1.0))
      throw parse_error("annulus inner radius must lie in (0,1)");
    return d;
  }
  if (head == "polygon" || head == "regular_polygon") {
    d.kind = DomainKind::regular_polygon;
    d.sides = static_cast<int>(parse_integer(rest, "polygon side count"));
    if (d.sides < 3) throw parse_error("polygon needs at least 3 sides");
    return d;
  }
  throw parse_error("unknown domain \"" + s +
                    "\" (expected interval|square|disk|annulus:<r0>|polygon:<k>)");
}

SymmetryGroup parse_group_spec(const std::string& s) {
  const auto [head, rest] = split_head(s);
  if (head == "reflect1d") {
    if (!rest.empty()) throw parse_error("group \"reflect1d\" takes no parameter");
    return make_reflection_1d();
  }
  if (head == "cyclic" || head == "dihedral" || head == "so2") {
    const long n = parse_integer(rest, "group order");
    if (n < 1) throw parse_error("group order must be >= 1");
    if (n > 4096) throw parse_error("group order too large (max 4096)");
    if (head == "cyclic") return make_cyclic(static_cast<int>(n));
    if (head == "dihedral") return make_dihedral(static_cast<int>(n));
    return make_so2_quadrature(static_cast<int>(n));
  }
  throw parse_error("unknown group \"" + s +
                    "\" (expected cyclic:<n>|dihedral:<n>|reflect1d|so2:<N>)");
}

ConcaveNonlinearity parse_nonlinearity_spec(const std::string& s) {
  const auto [head, rest] = split_head(s);
  if (head == "negexp") {
    if (!rest.empty()) throw parse_error("nonlinearity \"negexp\" takes no parameter");
    return ConcaveNonlinearity::negexp();
  }
  if (head == "linear")
    return ConcaveNonlinearity::linear(parse_number(rest, "linear coefficient"));
  if (head == "quadratic") {
    const std::vector<std::string> parts = split_list(rest, ',');
    if (parts.size() != 2)
      throw parse_error("quadratic nonlinearity needs two parameters \"a,b\"");
    const double a = parse_number(parts[0], "quadratic coefficient a");
    const double b = parse_number(parts[1], "quadratic coefficient b");
    if (b < 0.0) throw parse_error("quadratic coefficient b must be >= 0 (concavity)");
    return ConcaveNonlinearity::quadratic(a, b);
  }
  throw parse_error("unknown nonlinearity \"" + s +
                    "\" (expected linear:<l>|quadratic:<a>,<b>|negexp)");
}

EnergyFunctional parse_functional_spec(const std::string& s, ConcaveNonlinearity nl) {
  const auto [head, rest] = split_head(s);
  if (head == "plaplace") {
    double p = 0.0, eps = 1e-8;
    bool have_p = false;
    for (const std::string& item : split_list(rest, ',')) {
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw parse_error("plaplace parameters must be key=value, got \"" + item + '"');
      const std::string key = trim(item.substr(0, eq));
      const std::string val = trim(item.substr(eq + 1));
      if (key == "p") {
        p = parse_number(val, "exponent p");
        have_p = true;
      } else if (key == "eps") {
        eps = parse_number(val, "regularization eps");
      } else {
        throw parse_error("unknown plaplace parameter \"" + key + '"');
      }
    }
    if (!have_p) throw parse_error("plaplace spec needs p=<value>");
    if (!(p > 1.0)) throw parse_error("plaplace exponent must satisfy p > 1");
    if (!(eps >= 0.0)) throw parse_error("plaplace eps must be >= 0");
    return EnergyFunctional::make_p_dirichlet(p, eps, std::move(nl));
  }
  if (head == "polyharmonic") {
    const std::size_t eq = rest.find('=');
    if (eq == std::string::npos || trim(rest.substr(0, eq)) != "m")
      throw parse_error("polyharmonic spec needs m=<order>");
    const long m = parse_integer(trim(rest.substr(eq + 1)), "polyharmonic order");
    if (m < 1 || m > 8) throw parse_error("polyharmonic order must lie in [1,8]");
    return EnergyFunctional::make_polyharmonic(static_cast<int>(m), std::move(nl));
  }
  throw parse_error("unknown functional \"" + s +
                    "\" (expected plaplace:p=<p>[,eps=<e>]|polyharmonic:m=<m>)");
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << path << ':' << lineno << ": expected key=value, got \"" << body << '"';
      throw parse_error(msg.str());
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream msg;
      msg << path << ':' << lineno << ": empty key";
      throw parse_error(msg.str());
    }
    out.emplace_back(key, value);
  }
  return out;
}

}  // namespace gavg
