#include "gavg/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gavg/errors.hpp"

namespace gavg {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void export_field(const GridFunction& u, const std::string& path, FieldFormat format) {
  const Grid& g = *u.grid;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open for writing: " + path);

  if (format == FieldFormat::text) {
    f << g.nx << ' ' << g.ny << ' ' << fmt17(g.hx) << ' ' << fmt17(g.hy) << '\n';
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (i) f << ' ';
        const std::size_t idx = g.index(i, j);
        if (g.mask[idx])
          f << fmt17(u.values[idx]);
        else
          f << "nan";
      }
      f << '\n';
    }
  } else {
    double lo = 0.0, hi = 0.0;
    bool seen = false;
    for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
      if (!g.mask[idx]) continue;
      if (!seen) {
        lo = hi = u.values[idx];
        seen = true;
      } else {
        lo = std::min(lo, u.values[idx]);
        hi = std::max(hi, u.values[idx]);
      }
    }
    f << "P5\n" << g.nx << ' ' << g.ny << "\n65535\n";
    for (int j = g.ny - 1; j >= 0; --j)  // image rows top-down = decreasing y
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t idx = g.index(i, j);
        unsigned v = 0;
        if (g.mask[idx])
          v = hi > lo ? static_cast<unsigned>(
                            std::lround((u.values[idx] - lo) / (hi - lo) * 65535.0))
                      : 32768u;
        const char bytes[2] = {static_cast<char>((v >> 8) & 0xff),
                               static_cast<char>(v & 0xff)};
        f.write(bytes, 2);
      }
  }
  f.flush();
  if (!f) throw io_error("write failed: " + path);
}

GridFunction import_field(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open for reading: " + path);

  std::string line;
  if (!std::getline(f, line)) throw parse_error(path + ":1: missing header line");
  Grid g;
  {
    std::istringstream h(line);
    if (!(h >> g.nx >> g.ny >> g.hx >> g.hy) || g.nx < 1 || g.ny < 1 ||
        !(g.hx > 0.0) || !(g.hy > 0.0)) {
      throw parse_error(path + ":1: header must be \"nx ny hx hy\" with positive sizes");
    }
    std::string extra;
    if (h >> extra) throw parse_error(path + ":1: unexpected token after header");
  }
  g.ox = -0.5 * ((g.nx - 1) * g.hx);
  g.oy = g.ny == 1 ? 0.0 : -0.5 * ((g.ny - 1) * g.hy);
  if (g.ny == 1) g.hy = 1.0;

  const std::size_t expected = g.num_nodes();
  g.mask.assign(expected, 0);
  std::vector<double> values(expected, 0.0);
  std::size_t count = 0;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    std::istringstream row(line);
    std::string tok;
    while (row >> tok) {
      if (count >= expected) {
        std::ostringstream msg;
        msg << path << ':' << lineno << ": more than the expected " << expected
            << " values";
        throw parse_error(msg.str());
      }
      if (tok == "nan" || tok == "NaN" || tok == "NAN") {
        g.mask[count] = 0;
        values[count] = 0.0;
      } else {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) {
          std::ostringstream msg;
          msg << path << ':' << lineno << ": bad value token \"" << tok << '"';
          throw parse_error(msg.str());
        }
        g.mask[count] = 1;
        values[count] = v;
      }
      ++count;
    }
  }
  if (count != expected) {
    std::ostringstream msg;
    msg << path << ':' << lineno << ": expected " << expected << " values, got "
        << count;
    throw parse_error(msg.str());
  }

  GridFunction u;
  u.grid = std::make_shared<const Grid>(std::move(g));
  u.values = std::move(values);
  return u;
}

void write_history_csv(const std::string& path, const std::vector<double>& energy,
                       const std::vector<double>& residual) {
  if (energy.size() != residual.size())
    throw invalid_parameter("history columns must have equal length");
  std::ofstream f(path);
  if (!f) throw io_error("cannot open for writing: " + path);
  f << "iteration,energy,residual\n";
  for (std::size_t k = 0; k < energy.size(); ++k)
    f << k << ',' << fmt17(energy[k]) << ',' << fmt17(residual[k]) << '\n';
  f.flush();
  if (!f) throw io_error("write failed: " + path);
}

}  // namespace gavg
