// Command-line driver: averaging, minimization, probes, and the verify suite
// over symmetric grid domains. All numeric outputs are deterministic for a
// fixed flag set; the only non-reproducible JSON field is "timestamp".

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gavg/average.hpp"
#include "gavg/energy.hpp"
#include "gavg/errors.hpp"
#include "gavg/field.hpp"
#include "gavg/group.hpp"
#include "gavg/io.hpp"
#include "gavg/probes.hpp"
#include "gavg/solve.hpp"
#include "gavg/specs.hpp"
#include "gavg/verify.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string domain = "square";
  int resolution = 33;
  std::string group = "dihedral:4";
  std::string functional = "plaplace:p=2";
  std::string nonlinearity = "linear:1";
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string in;      // optional input field file
  std::string config;  // optional key=value config file
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_functional = true) {
  // The config file is merged into argv before CLI11 runs; the option is
  // registered here only so the flag is accepted in subcommand position.
  cmd->add_option("--config", f.config, "flat key=value config file");
  cmd->add_option("--domain", f.domain,
                  "interval|square|disk|annulus:<r0>|polygon:<k>");
  cmd->add_option("--resolution", f.resolution, "nodes per axis (>= 3)");
  cmd->add_option("--group", f.group, "cyclic:<n>|dihedral:<n>|reflect1d|so2:<N>");
  if (with_functional) {
    cmd->add_option("--functional", f.functional,
                    "plaplace:p=<p>[,eps=<e>]|polyharmonic:m=<m>");
    cmd->add_option("--nonlinearity", f.nonlinearity,
                    "linear:<l>|quadratic:<a>,<b>|negexp");
  }
  cmd->add_option("--seed", f.seed, "seed for generated fields");
  cmd->add_option("--out", f.out, "output path prefix");
  cmd->add_option("--in", f.in, "input GridFunction file (default: seeded random field)");
}

std::string timestamp_utc() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json group_json(const gavg::SymmetryGroup& g) {
  json j;
  j["elements"] = g.size();
  j["kind"] = g.kind == gavg::GroupKind::finite ? "finite" : "so2-quadrature";
  return j;
}

// Loads --in (optionally re-attaching the continuous domain when --domain was
// given explicitly) or synthesizes a seeded random field.
gavg::GridFunction load_or_make_field(const CommonFlags& f, bool domain_explicit,
                                      int smoothness) {
  if (f.in.empty()) {
    const gavg::DomainSpec spec = gavg::parse_domain_spec(f.domain);
    return gavg::random_field(gavg::make_grid(spec, f.resolution), f.seed, smoothness);
  }
  gavg::GridFunction u = gavg::import_field(f.in);
  if (domain_explicit) {
    const gavg::DomainSpec spec = gavg::parse_domain_spec(f.domain);
    gavg::Grid g = *u.grid;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (g.mask[g.index(i, j)] &&
            !gavg::domain_contains(spec, g.node_x(i), g.node_y(j), 1e-9))
          throw gavg::invalid_parameter(
              "imported mask has nodes outside the requested --domain");
    g.domain = spec;
    u.grid = std::make_shared<const gavg::Grid>(std::move(g));
  }
  return u;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw gavg::io_error("cannot open for writing: " + path);
  f << j.dump(2) << '\n';
  f.flush();
  if (!f) throw gavg::io_error("write failed: " + path);
}

json minimize_result_json(const gavg::MinimizeResult& r) {
  json j;
  j["energy"] = r.energy;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["converged"] = r.converged;
  return j;
}

json average_report_json(const gavg::AverageReport& rep) {
  json j;
  j["jensen_gap"] = rep.jensen_gap;
  j["invariance_residual"] = rep.invariance_residual;
  j["norm_bound_satisfied"] = rep.norm_bound_satisfied;
  j["subgradient_min_gap"] = rep.subgradient_min_gap;
  return j;
}

// Merges config-file pairs into the argument list: command-line flags win,
// config supplies the rest. "kind" must match the chosen subcommand.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::vector<std::string> merged = args;
  const std::string subcommand = args.empty() || args[0].empty() || args[0][0] == '-'
                                     ? ""
                                     : args[0];
  for (auto& [key0, value] : gavg::read_config_file(config_path)) {
    std::string key = key0;
    for (char& c : key)
      if (c == '_') c = '-';
    if (key == "kind") {
      if (value != subcommand)
        throw gavg::parse_error("config kind=" + value +
                                " does not match subcommand " +
                                (subcommand.empty() ? "(none)" : subcommand));
      continue;
    }
    const std::string flag = "--" + key;
    bool present = false;
    for (const std::string& a : merged)
      if (a == flag || a.rfind(flag + "=", 0) == 0) {
        present = true;
        break;
      }
    if (!present) merged.push_back(flag + "=" + value);
  }
  return merged;
}

int run(const std::vector<std::string>& argv_tail) {
  CLI::App app{"group-averaging toolkit for grid functions on symmetric domains"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file")
      ->expected(1);

  CommonFlags avg_f, min_f, mv_f, pc_f, ct_f, vs_f;

  CLI::App* c_avg = app.add_subcommand("average", "group-average a field and report the inequality gaps");
  add_common(c_avg, avg_f);

  CLI::App* c_min = app.add_subcommand("minimize", "minimize, average, and re-minimize (polish)");
  add_common(c_min, min_f);
  gavg::MinimizeOptions mopts;
  bool write_pgm = false;
  c_min->add_option("--max-iters", mopts.max_iters, "iteration cap");
  c_min->add_option("--grad-tol", mopts.grad_tol, "convergence tolerance");
  c_min->add_option("--energy-floor", mopts.energy_floor, "divergence floor");
  c_min->add_flag("--pgm", write_pgm, "also write PGM heatmaps");

  CLI::App* c_mv = app.add_subcommand("probe-meanvalue", "search the orbit for an element equal to the average");
  add_common(c_mv, mv_f, false);

  CLI::App* c_pc = app.add_subcommand("probe-polyconvex", "measure how far minors fail to commute with averaging");
  add_common(c_pc, pc_f, false);
  int pc_k = 2, pc_n = 2, pc_s = 2;
  c_pc->add_option("--rows", pc_k, "matrix rows k (2 or 3)");
  c_pc->add_option("--cols", pc_n, "matrix cols n (2 or 3, must equal group dim)");
  c_pc->add_option("--minor-order", pc_s, "minor order s, 2 <= s <= min(k,n)");

  CLI::App* c_ct = app.add_subcommand("probe-continuity", "estimate the Lipschitz constant of the action");
  add_common(c_ct, ct_f, false);
  int ct_pairs = 64, ct_smooth = 4;
  double ct_p = 2.0;
  c_ct->add_option("--pair-samples", ct_pairs, "element pairs to sample");
  c_ct->add_option("--p", ct_p, "norm exponent");
  c_ct->add_option("--smoothness", ct_smooth, "smoothing passes for the probe field");

  CLI::App* c_vs = app.add_subcommand("verify-suite", "run every module invariant check at its stated tolerance");
  add_common(c_vs, vs_f);
  int vs_fields = 8;
  c_vs->add_option("--fields", vs_fields, "random fields per property");

  try {
    std::vector<std::string> merged = merge_config(argv_tail);
    std::vector<std::string> full;
    full.push_back("gavg");
    for (const std::string& a : merged) full.push_back(a);
    std::vector<char*> ptrs;
    for (std::string& s : full) ptrs.push_back(s.data());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (c_avg->parsed()) {
    const CommonFlags& f = avg_f;
    const gavg::SymmetryGroup grp = gavg::parse_group_spec(f.group);
    const gavg::EnergyFunctional fun = gavg::parse_functional_spec(
        f.functional, gavg::parse_nonlinearity_spec(f.nonlinearity));
    const gavg::GridFunction u =
        load_or_make_field(f, c_avg->count("--domain") > 0, 1);
    const gavg::GridFunction ug = gavg::g_average(u, grp);
    const gavg::AverageReport rep = gavg::make_average_report(fun, u, grp);
    gavg::export_field(ug, f.out + "_uG.txt", gavg::FieldFormat::text);
    json j = average_report_json(rep);
    j["group"] = group_json(grp);
    j["functional"] = f.functional;
    j["nonlinearity"] = f.nonlinearity;
    j["timestamp"] = timestamp_utc();
    write_json(f.out + "_average.json", j);
    std::cout << "wrote " << f.out << "_uG.txt and " << f.out << "_average.json\n";
    return 0;
  }

  if (c_min->parsed()) {
    const CommonFlags& f = min_f;
    const gavg::SymmetryGroup grp = gavg::parse_group_spec(f.group);
    const gavg::EnergyFunctional fun = gavg::parse_functional_spec(
        f.functional, gavg::parse_nonlinearity_spec(f.nonlinearity));
    const gavg::GridFunction u0 =
        load_or_make_field(f, c_min->count("--domain") > 0, 1);
    const gavg::SymmetrizeResult res = gavg::symmetrize_and_polish(fun, grp, u0, mopts);

    gavg::export_field(res.raw.u_min, f.out + "_u_raw.txt", gavg::FieldFormat::text);
    gavg::export_field(res.averaged, f.out + "_u_avg.txt", gavg::FieldFormat::text);
    gavg::export_field(res.polished.u_min, f.out + "_u_polished.txt",
                       gavg::FieldFormat::text);
    gavg::write_history_csv(f.out + "_history_raw.csv", res.raw.energy_history,
                            res.raw.residual_history);
    gavg::write_history_csv(f.out + "_history_polished.csv",
                            res.polished.energy_history, res.polished.residual_history);
    if (write_pgm) {
      gavg::export_field(res.raw.u_min, f.out + "_u_raw.pgm", gavg::FieldFormat::pgm);
      gavg::export_field(res.averaged, f.out + "_u_avg.pgm", gavg::FieldFormat::pgm);
      gavg::export_field(res.polished.u_min, f.out + "_u_polished.pgm",
                         gavg::FieldFormat::pgm);
    }
    json j;
    j["raw"] = minimize_result_json(res.raw);
    j["averaged_energy"] = fun.eval(res.averaged);
    j["polished"] = minimize_result_json(res.polished);
    j["report"] = average_report_json(res.report);
    j["group"] = group_json(grp);
    j["functional"] = f.functional;
    j["nonlinearity"] = f.nonlinearity;
    j["timestamp"] = timestamp_utc();
    write_json(f.out + "_summary.json", j);
    std::cout << "raw energy " << res.raw.energy << ", polished energy "
              << res.polished.energy << '\n';
    return 0;
  }

  if (c_mv->parsed()) {
    const CommonFlags& f = mv_f;
    const gavg::SymmetryGroup grp = gavg::parse_group_spec(f.group);
    const gavg::GridFunction u =
        load_or_make_field(f, c_mv->count("--domain") > 0, 1);
    const gavg::MeanValueResult res = gavg::mean_value_probe(u, grp);
    json j;
    j["probe"] = "meanvalue";
    j["distance"] = res.distance;
    j["best_index"] = res.best_index;
    j["strong_property_holds"] = res.distance <= 1e-12 * (1.0 + gavg::sup_norm(u));
    j["group"] = group_json(grp);
    j["timestamp"] = timestamp_utc();
    write_json(f.out + "_meanvalue.json", j);
    std::cout << "meanvalue distance " << res.distance << '\n';
    return 0;
  }

  if (c_pc->parsed()) {
    const CommonFlags& f = pc_f;
    const gavg::SymmetryGroup grp = gavg::parse_group_spec(f.group);
    const gavg::DomainSpec spec = gavg::parse_domain_spec(f.domain);
    const gavg::GridPtr grid = gavg::make_grid(spec, f.resolution);
    const gavg::MatrixField phi = gavg::random_matrix_field(grid, pc_k, pc_n, f.seed);
    const double gap = gavg::polyconvexity_gap(phi, grp, pc_s);
    json j;
    j["probe"] = "polyconvex";
    j["gap"] = gap;
    j["rows"] = pc_k;
    j["cols"] = pc_n;
    j["minor_order"] = pc_s;
    j["minor_count_tau"] = gavg::tau(pc_k, pc_n);
    j["group"] = group_json(grp);
    j["timestamp"] = timestamp_utc();
    write_json(f.out + "_polyconvex.json", j);
    std::cout << "polyconvexity gap " << gap << '\n';
    return 0;
  }

  if (c_ct->parsed()) {
    const CommonFlags& f = ct_f;
    const gavg::SymmetryGroup grp = gavg::parse_group_spec(f.group);
    gavg::GridFunction v = load_or_make_field(f, c_ct->count("--domain") > 0, ct_smooth);
    const gavg::ContinuityReport rep =
        gavg::action_continuity_probe(v, grp, ct_pairs, ct_p);
    json j;
    j["probe"] = "continuity";
    j["c_max"] = rep.c_max;
    j["c_mean"] = rep.c_mean;
    j["pairs"] = rep.pairs;
    j["p"] = ct_p;
    j["group"] = group_json(grp);
    j["timestamp"] = timestamp_utc();
    write_json(f.out + "_continuity.json", j);
    std::cout << "continuity estimate c_max " << rep.c_max << '\n';
    return 0;
  }

  if (c_vs->parsed()) {
    const CommonFlags& f = vs_f;
    gavg::VerifyOptions vo;
    vo.domain = gavg::parse_domain_spec(f.domain);
    vo.resolution = f.resolution;
    vo.group = gavg::parse_group_spec(f.group);
    vo.functional = gavg::parse_functional_spec(
        f.functional, gavg::parse_nonlinearity_spec(f.nonlinearity));
    vo.seed = f.seed;
    vo.num_fields = vs_fields;
    const gavg::VerifySuiteReport rep = gavg::run_verify_suite(vo);
    json checks = json::array();
    for (const gavg::VerifyCheck& c : rep.checks) {
      json jc;
      jc["name"] = c.name;
      jc["worst"] = c.worst;
      if (std::isfinite(c.tolerance))
        jc["tolerance"] = c.tolerance;
      else
        jc["tolerance"] = nullptr;  // interpolation path: reported, unbounded
      jc["pass"] = c.pass;
      jc["gating"] = c.gating;
      checks.push_back(jc);
      std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " worst " << c.worst
                << '\n';
    }
    json j;
    j["checks"] = checks;
    j["all_pass"] = rep.all_pass;
    j["group"] = group_json(vo.group);
    j["functional"] = f.functional;
    j["nonlinearity"] = f.nonlinearity;
    j["timestamp"] = timestamp_utc();
    write_json(f.out + "_verify.json", j);
    return rep.all_pass ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const gavg::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const gavg::invalid_parameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const gavg::invariant_domain_violation& e) {
    std::cerr << "domain invariance violation: " << e.what() << '\n';
    return 3;
  } catch (const gavg::not_invariant_error& e) {
    std::cerr << "invariance violation: " << e.what() << '\n';
    return 3;
  } catch (const gavg::divergence_error& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return 4;
  } catch (const gavg::io_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
