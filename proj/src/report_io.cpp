#include "qnls/report_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qnls {

using nlohmann::json;

json to_json(const EnergyBreakdown& e) {
  return {{"dirichlet", e.dirichlet},
          {"potential", e.potential},
          {"quasilinear", e.quasilinear},
          {"nonlinear", e.nonlinear},
          {"total", e.total}};
}

json to_json(const PohozaevResidual& r) {
  return {{"a", r.a}, {"value", r.value}, {"nehari_part", r.nehari_part}, {"base_part", r.base_part}};
}

json to_json(const SolveReport& r) {
  return {{"schema_version", kReportSchemaVersion},
          {"m", r.m},
          {"energy", to_json(r.energy)},
          {"iterations", r.iterations},
          {"restarts", r.restarts},
          {"converged", r.converged},
          {"positivity", r.positivity},
          {"weak_residual", r.weak_residual},
          {"tangent_residual", r.tangent_residual},
          {"multiplier", r.multiplier},
          {"J", r.J_history.empty() ? 0.0 : r.J_history.back()},
          {"pohozaev", json::array({to_json(r.pohozaev.minus_one), to_json(r.pohozaev.zero), to_json(r.pohozaev.one)})},
          {"u0", r.u_star[0]},
          {"grid", {{"N", r.u_star.grid().dimension()}, {"r_max", r.u_star.grid().r_max()}, {"n", r.u_star.size()}}},
          {"history",
           {{"energy", r.energy_history},
            {"J", r.J_history},
            {"weak_residual", r.weak_residual_history},
            {"tangent_residual", r.tangent_residual_history},
            {"t_star", r.t_star_history}}},
          {"warnings", r.warnings}};
}

json to_json(const HypothesisReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back({{"hypothesis", w.hypothesis}, {"r", w.r}, {"s", w.s}, {"value", w.value}});
  }
  return {{"v1_ok", r.v1_ok},
          {"v2_ok", r.v2_ok},
          {"v3_ok", r.v3_ok},
          {"v2_bound", r.v2_bound},
          {"v3_min_second_derivative", r.v3_min_second_derivative},
          {"fd_max_discrepancy", r.fd_max_discrepancy},
          {"r_checked_max", r.r_checked_max},
          {"tail_checked_max", r.tail_checked_max},
          {"s_checked", {r.s_checked.first, r.s_checked.second}},
          {"witnesses", witnesses}};
}

json to_json(const CondPoho& c) {
  return {{"i1", c.i1},           {"i2", c.i2},         {"i3", c.i3},
          {"holder2", c.holder2}, {"hardy2", c.hardy2}, {"holder3", c.holder3},
          {"hardy3", c.hardy3},   {"finite", c.finite}, {"hardy_constant", c.hardy_constant}};
}

json to_json(const DecayFit& f) {
  return {{"rate", f.rate},
          {"amplitude", f.amplitude},
          {"window", {f.r_lo, f.r_hi}},
          {"fit_residual", f.fit_residual}};
}

json to_json(const CoercivityConstant& c) {
  return {{"c", c.c}, {"t_used", c.t_used}, {"gamma", c.gamma}, {"gaps", {c.gaps[0], c.gaps[1], c.gaps[2]}}};
}

std::string profile_text(const Field& u) {
  std::ostringstream out;
  out.precision(17);
  out << "# r u\n";
  for (std::size_t i = 0; i < u.size(); ++i) out << u.grid().node(i) << ' ' << u[i] << '\n';
  return out.str();
}

std::string history_csv(const SolveReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,energy,J,weak_residual,tangent_residual\n";
  for (std::size_t k = 0; k < r.energy_history.size(); ++k) {
    out << k << ',' << r.energy_history[k] << ',' << r.J_history[k] << ',' << r.weak_residual_history[k] << ','
        << r.tangent_residual_history[k] << '\n';
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace qnls
