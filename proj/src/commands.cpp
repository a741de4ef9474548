#include "qnls/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "qnls/diagnostics.hpp"
#include "qnls/oracle.hpp"
#include "qnls/report_io.hpp"

namespace qnls {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"solve",   "fiber-scan",     "check-potential",
                                                 "pohozaev", "oracle-compare", "sweep"};
  return names;
}

PotentialModel potential_from(const Config& cfg) {
  std::map<std::string, double> params;
  for (const char* key : {"omega", "a", "k"}) {
    const std::string full = std::string("potential.") + key;
    if (cfg.has(full)) params[key] = cfg.number(full);
  }
  try {
    return potentials::from_name(cfg.string("potential.kind"), params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'potential.kind': ") + e.what());
  }
}

HypothesisOptions hypothesis_options_from(const Config& cfg) {
  HypothesisOptions h;
  h.r_max = cfg.number("hypotheses.r_max");
  h.r_samples = static_cast<std::size_t>(cfg.integer("hypotheses.r_samples"));
  h.s_min = cfg.number("hypotheses.s_min");
  h.s_max = cfg.number("hypotheses.s_max");
  h.s_points = static_cast<std::size_t>(cfg.integer("hypotheses.s_points"));
  h.tail_points = static_cast<std::size_t>(cfg.integer("hypotheses.tail_points"));
  h.tolerance = cfg.number("hypotheses.tolerance");
  return h;
}

namespace {

InitSpec init_from(const Config& cfg) {
  InitSpec init;
  const auto kind = cfg.string("solver.init");
  if (kind == "gaussian") {
    init.kind = InitSpec::Kind::gaussian;
  } else if (kind == "bump") {
    init.kind = InitSpec::Kind::bump;
  } else if (kind == "file") {
    init.kind = InitSpec::Kind::file;
    init.path = cfg.string("solver.init_file");
    if (init.path.empty()) throw ConfigError("key 'solver.init_file': required when solver.init = file");
  } else {
    throw ConfigError("key 'solver.init': expected gaussian | bump | file, got '" + kind + "'");
  }
  init.width = cfg.number("solver.init_width");
  init.radius = cfg.number("solver.init_radius");
  if (!(init.width > 0.0)) throw ConfigError("key 'solver.init_width': must be positive");
  if (!(init.radius > 0.0)) throw ConfigError("key 'solver.init_radius': must be positive");
  return init;
}

GridPtr grid_from(const Config& cfg) {
  const auto spacing_name = cfg.string("grid.spacing");
  Spacing spacing;
  if (spacing_name == "uniform") {
    spacing = Spacing::uniform;
  } else if (spacing_name == "graded") {
    spacing = Spacing::graded;
  } else {
    throw ConfigError("key 'grid.spacing': expected uniform | graded, got '" + spacing_name + "'");
  }
  const long long n = cfg.integer("grid.n");
  if (n < 16) throw ConfigError("key 'grid.n': need at least 16 nodes");
  try {
    return build_grid(static_cast<int>(cfg.integer("problem.N")), cfg.number("grid.r_max"),
                      static_cast<std::size_t>(n), spacing, cfg.number("grid.ratio"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

struct Outputs {
  fs::path dir;
  bool json = true;
  bool csv = true;

  explicit Outputs(const Config& cfg) : dir(cfg.string("output.dir")) {
    const auto formats = cfg.strings("output.formats");
    for (const auto& f : formats) {
      if (f != "csv" && f != "json") throw ConfigError("key 'output.formats': unknown format '" + f + "'");
    }
    json = std::find(formats.begin(), formats.end(), "json") != formats.end();
    csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("key 'output.dir': cannot create '" + dir.string() + "'");
  }
};

std::string fmt(double x, int digits = 10) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

json config_json(const Config& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.effective()) j[k] = v;
  return j;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

json diagnostics_json(const SolveReport& r, const PotentialModel& V, double p) {
  json d;
  d["condpoho"] = to_json(condpoho_check(r.u_star, V, p));
  const auto peak = linf_bound(r.u_star);
  d["linf"] = {{"value", peak.value}, {"r", peak.r}};
  try {
    d["decay"] = to_json(decay_fit(r.u_star));
  } catch (const std::domain_error& e) {
    d["decay"] = {{"error", e.what()}};
  }
  const int N = r.u_star.grid().dimension();
  try {
    const auto c = coercivity_constant(V.V0(), V.V_inf(), p, N);
    d["coercivity"] = to_json(c);
    d["coercivity"]["norm"] = coercivity_norm(r.u_star);
  } catch (const std::exception& e) {
    d["coercivity"] = {{"error", e.what()}};
  }
  d["comparison"] = {{"ibar", comparison_energy(r.u_star, V.V0(), p).ibar}};
  return d;
}

void write_solve_outputs(const Outputs& o, const fs::path& dir, const SolveReport& r, const PotentialModel& V,
                         double p, json extra) {
  write_text(dir / "u_star.txt", profile_text(r.u_star));
  if (o.csv) write_text(dir / "history.csv", history_csv(r));
  if (o.json) {
    json j = to_json(r);
    j["diagnostics"] = diagnostics_json(r, V, p);
    for (auto& [k, v] : extra.items()) j[k] = v;
    write_json(dir / "report.json", j);
  }
}

std::string solve_summary(const std::string& name, const SolveReport& r) {
  std::ostringstream s;
  s << name << ": " << (r.converged ? "converged" : "NOT converged") << " m=" << fmt(r.m, 12)
    << " iterations=" << r.iterations << " |J|=" << fmt(std::abs(r.J_history.empty() ? 0.0 : r.J_history.back()), 3)
    << " weak=" << fmt(r.weak_residual, 3) << " tangent=" << fmt(r.tangent_residual, 3);
  return s.str();
}

struct Problem {
  SolveConfig solve;
  HypothesisReport hypotheses;
};

// V1 failure means no ground state is sought; V3 failure switches fibers to global scans.
Problem prepare(const Config& cfg) {
  Problem pr{solve_config_from(cfg), {}};
  pr.hypotheses = check_hypotheses(pr.solve.potential, pr.solve.p, pr.solve.grid->dimension(), hypothesis_options_from(cfg));
  pr.solve.assume_concave = pr.hypotheses.v3_ok;
  return pr;
}

int cmd_solve(const Config& cfg, std::ostream& out) {
  const Outputs o(cfg);
  const auto pr = prepare(cfg);
  json extra = {{"hypotheses", to_json(pr.hypotheses)}, {"config", config_json(cfg)}};
  if (!pr.hypotheses.v1_ok) {
    if (o.json) write_json(o.dir / "report.json", {{"schema_version", kReportSchemaVersion}, {"hypotheses", extra["hypotheses"]}, {"converged", false}});
    out << "solve: (V1) fails for potential '" << pr.solve.potential.kind() << "'; no solve attempted\n";
    return exit_code::failed;
  }
  const auto r = minimize_ground_state(pr.solve);
  write_solve_outputs(o, o.dir, r, pr.solve.potential, pr.solve.p, extra);
  out << solve_summary("solve", r) << '\n';
  return r.converged ? exit_code::ok : exit_code::failed;
}

int cmd_fiber_scan(const Config& cfg, std::ostream& out) {
  const Outputs o(cfg);
  const auto sc = solve_config_from(cfg);
  const double t_min = cfg.number("fiber.t_min");
  const double t_max = cfg.number("fiber.t_max");
  const auto points = cfg.integer("fiber.points");
  if (!(t_min > 0.0 && t_min < t_max)) throw ConfigError("keys 'fiber.t_min', 'fiber.t_max': need 0 < t_min < t_max");
  if (points < 3) throw ConfigError("key 'fiber.points': need at least 3");
  const auto u = initial_field(sc.grid, sc.init);
  const auto scan = fiber_scan(u, sc.potential, sc.p, t_min, t_max, static_cast<std::size_t>(points));
  const auto hyp = check_hypotheses(sc.potential, sc.p, sc.grid->dimension(), hypothesis_options_from(cfg));
  FiberOptions fo;
  fo.scan_points = 0;
  fo.assume_concave = hyp.v3_ok;
  const auto fm = maximize_fiber(u, sc.potential, sc.p, fo);
  const auto changes = scan.sign_changes();
  const bool pass = changes == 1;
  if (o.csv) write_text(o.dir / "fiber_scan.csv", scan.to_csv());
  if (o.json) {
    write_json(o.dir / "report.json", {{"schema_version", kReportSchemaVersion},
                                       {"t_star", fm.t_star},
                                       {"f_star", fm.f_star},
                                       {"sign_changes", changes},
                                       {"s_concave", scan.s_concave},
                                       {"v3_ok", hyp.v3_ok},
                                       {"warnings", fm.warnings},
                                       {"config", config_json(cfg)}});
  }
  out << "fiber-scan: " << (pass ? "pass" : "FAIL") << " sign_changes=" << changes << " t_star=" << fmt(fm.t_star)
      << " s_concave=" << (scan.s_concave ? "yes" : "no") << '\n';
  return pass ? exit_code::ok : exit_code::failed;
}

int cmd_check_potential(const Config& cfg, std::ostream& out) {
  const Outputs o(cfg);
  const auto sc = solve_config_from(cfg);
  const auto h = hypothesis_options_from(cfg);
  const int N = sc.grid->dimension();
  const auto report = check_hypotheses(sc.potential, sc.p, N, h);
  json j = {{"schema_version", kReportSchemaVersion}, {"hypotheses", to_json(report)}, {"all_ok", report.all_ok()},
            {"config", config_json(cfg)}};
  // omega0 of the unshifted profile W = V - omega.
  double w0 = std::numeric_limits<double>::quiet_NaN();
  if (!sc.potential.is_constant()) {
    auto params = sc.potential.parameters();
    const double omega = params.count("omega") ? params.at("omega") : 0.0;
    params["omega"] = 0.0;
    const auto W = potentials::from_name(sc.potential.kind(), params);
    w0 = omega0(W, sc.p, N, h);
    j["omega0"] = w0;
    j["omega"] = omega;
  } else {
    j["omega0"] = 0.0;
  }
  if (o.json) write_json(o.dir / "report.json", j);
  if (o.csv) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "hypothesis,r,s,value\n";
    for (const auto& w : report.witnesses) csv << w.hypothesis << ',' << w.r << ',' << w.s << ',' << w.value << '\n';
    write_text(o.dir / "witnesses.csv", csv.str());
  }
  out << "check-potential: " << sc.potential.kind() << " V1=" << (report.v1_ok ? "ok" : "FAIL")
      << " V2=" << (report.v2_ok ? "ok" : "FAIL") << " V3=" << (report.v3_ok ? "ok" : "FAIL")
      << " witnesses=" << report.witnesses.size();
  if (!std::isnan(w0)) out << " omega0=" << fmt(w0);
  out << '\n';
  return report.all_ok() ? exit_code::ok : exit_code::failed;
}

int cmd_pohozaev(const Config& cfg, std::ostream& out) {
  const Outputs o(cfg);
  const auto a_values = cfg.numbers("pohozaev.a_values");
  if (a_values.empty()) throw ConfigError("key 'pohozaev.a_values': empty list");
  const auto pr = prepare(cfg);
  if (!pr.hypotheses.v1_ok) {
    out << "pohozaev: (V1) fails; no solve attempted\n";
    return exit_code::failed;
  }
  const auto r = minimize_ground_state(pr.solve);
  const double D = r.energy.dirichlet;
  json rows = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "a,value,nehari_part,base_part,relative\n";
  double worst = 0.0;
  for (double a : a_values) {
    const auto res = pohozaev_residual(r.u_star, pr.solve.potential, pr.solve.p, a);
    worst = std::max(worst, std::abs(res.value) / D);
    rows.push_back(to_json(res));
    csv << a << ',' << res.value << ',' << res.nehari_part << ',' << res.base_part << ',' << res.value / D << '\n';
  }
  const bool pass = r.converged && worst <= 1e-3;
  if (o.csv) write_text(o.dir / "pohozaev.csv", csv.str());
  write_solve_outputs(o, o.dir, r, pr.solve.potential, pr.solve.p,
                      {{"pohozaev_family", rows}, {"pohozaev_max_relative", worst}, {"pass", pass},
                       {"hypotheses", to_json(pr.hypotheses)}, {"config", config_json(cfg)}});
  out << "pohozaev: " << (pass ? "pass" : "FAIL") << " max|R_a|/D=" << fmt(worst, 3) << " over " << a_values.size()
      << " values, " << solve_summary("solve", r) << '\n';
  return pass ? exit_code::ok : exit_code::failed;
}

int cmd_oracle_compare(const Config& cfg, std::ostream& out) {
  const Outputs o(cfg);
  const auto pr = prepare(cfg);
  if (!pr.solve.potential.is_constant()) {
    throw ConfigError("key 'potential.kind': oracle-compare needs a constant potential");
  }
  OracleOptions oo;
  oo.dr = cfg.number("oracle.dr");
  oo.r_max = cfg.number("oracle.r_max");
  const double V = pr.solve.potential(0.0);
  const auto r = minimize_ground_state(pr.solve);
  const auto oracle = find_ground_profile(V, pr.solve.p, pr.solve.grid, oo);
  const double energy_gap = std::abs(r.m - oracle.energy) / std::abs(oracle.energy);
  const double sup_gap = max_abs((r.u_star - oracle.profile).values()) / oracle.profile[0];
  const bool pass = r.converged && energy_gap <= 1e-2 && sup_gap <= 1e-2;
  json cands = json::array();
  for (const auto& c : oracle.candidates) cands.push_back({{"s0", c.s0}, {"r_exit", c.r_exit}, {"energy", c.energy}});
  write_text(o.dir / "oracle_profile.txt", profile_text(oracle.profile));
  write_solve_outputs(o, o.dir, r, pr.solve.potential, pr.solve.p,
                      {{"oracle", {{"energy", oracle.energy}, {"s0", oracle.s0}, {"r_exit", oracle.r_exit}, {"candidates", cands}}},
                       {"energy_gap_relative", energy_gap},
                       {"sup_gap_relative", sup_gap},
                       {"pass", pass},
                       {"config", config_json(cfg)}});
  out << "oracle-compare: " << (pass ? "pass" : "FAIL") << " m=" << fmt(r.m, 12) << " oracle=" << fmt(oracle.energy, 12)
      << " energy_gap=" << fmt(energy_gap, 3) << " sup_gap=" << fmt(sup_gap, 3) << '\n';
  return pass ? exit_code::ok : exit_code::failed;
}

int cmd_sweep(const Config& cfg, std::ostream& out) {
  const Outputs o(cfg);
  const auto p_values = cfg.numbers("sweep.p_values");
  if (p_values.empty()) throw ConfigError("key 'sweep.p_values': empty list");
  const auto seed = static_cast<std::uint64_t>(cfg.integer("sweep.seed"));
  const auto workers = cfg.integer("sweep.workers");
  if (workers < 0) throw ConfigError("key 'sweep.workers': must be >= 0");

  // Validate every task before any work starts so a bad p is a config error.
  std::vector<Problem> problems;
  std::vector<double> widths;
  for (std::size_t k = 0; k < p_values.size(); ++k) {
    Config task = cfg;
    task.set("problem.p", fmt(p_values[k], 17));
    problems.push_back(prepare(task));
    std::mt19937_64 rng(seed + k);
    widths.push_back(std::uniform_real_distribution<double>(1.0, 3.0)(rng));
    problems.back().solve.init.kind = InitSpec::Kind::gaussian;
    problems.back().solve.init.width = widths.back();
  }

  const int n = static_cast<int>(p_values.size());
  std::vector<json> rows(n);
  std::vector<int> codes(n, exit_code::failed);
  std::vector<std::string> errors(n);
  const int threads = workers > 0 ? static_cast<int>(workers) : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int k = 0; k < n; ++k) {
    const auto& pr = problems[k];
    std::ostringstream name;
    name << "p_" << std::setw(2) << std::setfill('0') << k;
    const fs::path dir = o.dir / name.str();
    try {
      json row = {{"index", k}, {"p", p_values[k]}, {"init_width", widths[k]}, {"dir", name.str()}};
      if (!pr.hypotheses.v1_ok) {
        row["converged"] = false;
        row["error"] = "(V1) fails";
      } else {
        const auto r = minimize_ground_state(pr.solve);
        write_solve_outputs(o, dir, r, pr.solve.potential, pr.solve.p,
                            {{"hypotheses", to_json(pr.hypotheses)}, {"init_width", widths[k]}, {"seed", seed + k}});
        row["m"] = r.m;
        row["converged"] = r.converged;
        row["iterations"] = r.iterations;
        codes[k] = r.converged ? exit_code::ok : exit_code::failed;
      }
      rows[k] = row;
    } catch (const std::exception& e) {
      errors[k] = e.what();
      rows[k] = {{"index", k}, {"p", p_values[k]}, {"converged", false}, {"error", e.what()}};
    }
  }
  const auto converged = std::count(codes.begin(), codes.end(), exit_code::ok);
  if (o.json) {
    write_json(o.dir / "sweep.json",
               {{"schema_version", kReportSchemaVersion}, {"seed", seed}, {"runs", rows}, {"config", config_json(cfg)}});
  }
  if (o.csv) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "index,p,init_width,m,converged\n";
    for (int k = 0; k < n; ++k) {
      csv << k << ',' << p_values[k] << ',' << widths[k] << ',' << rows[k].value("m", std::nan("")) << ','
          << (codes[k] == exit_code::ok ? 1 : 0) << '\n';
    }
    write_text(o.dir / "sweep.csv", csv.str());
  }
  out << "sweep: " << converged << "/" << n << " converged, seed=" << seed << '\n';
  return converged == n ? exit_code::ok : exit_code::failed;
}

}  // namespace

SolveConfig solve_config_from(const Config& cfg) {
  SolveConfig sc;
  sc.p = cfg.number("problem.p");
  const auto N = cfg.integer("problem.N");
  if (N < 3) throw ConfigError("key 'problem.N': need N >= 3");
  require_admissible_exponent(sc.p, static_cast<int>(N));
  sc.grid = grid_from(cfg);
  sc.potential = potential_from(cfg);
  sc.init = init_from(cfg);
  sc.max_iters = static_cast<int>(cfg.integer("solver.max_iters"));
  sc.step0 = cfg.number("solver.step0");
  sc.tol_weak = cfg.number("solver.tol_weak");
  sc.tol_J = cfg.number("solver.tol_J");
  sc.tol_tangent = cfg.number("solver.tol_tangent");
  if (sc.max_iters < 1) throw ConfigError("key 'solver.max_iters': must be positive");
  if (!(sc.step0 > 0.0)) throw ConfigError("key 'solver.step0': must be positive");
  return sc;
}

int run_command(const std::string& subcommand, const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (subcommand == "solve") return cmd_solve(cfg, out);
    if (subcommand == "fiber-scan") return cmd_fiber_scan(cfg, out);
    if (subcommand == "check-potential") return cmd_check_potential(cfg, out);
    if (subcommand == "pohozaev") return cmd_pohozaev(cfg, out);
    if (subcommand == "oracle-compare") return cmd_oracle_compare(cfg, out);
    if (subcommand == "sweep") return cmd_sweep(cfg, out);
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return exit_code::usage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << subcommand << ": failed: " << e.what() << '\n';
    return exit_code::failed;
  }
}

}  // namespace qnls
