#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "qnls/commands.hpp"
#include "qnls/config.hpp"

namespace {

const std::map<std::string, std::string> kHelp = {
    {"solve", "minimize I on the Pohozaev manifold; writes u_star.txt, history.csv, report.json"},
    {"fiber-scan", "sample f_u and f_u' of the initial field; writes fiber_scan.csv"},
    {"check-potential", "check (V1)-(V3) and omega0; writes witnesses.csv"},
    {"pohozaev", "solve, then evaluate R_a for pohozaev.a_values; writes pohozaev.csv"},
    {"oracle-compare", "solve and compare with the shooting profile (constant V only)"},
    {"sweep", "solve for every sweep.p_values in parallel; writes sweep.csv, sweep.json"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of -Lap u + V u - u Lap(u^2)/2 = |u|^{p-1} u on the Pohozaev manifold"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::vector<std::string> overrides;
  bool print_config = false;
  for (const auto& name : qnls::subcommands()) {
    auto* sub = app.add_subcommand(name, kHelp.at(name));
    sub->add_option("config", config_path, "flat key = value config file")->required()->check(CLI::ExistingFile);
    sub->add_option("overrides", overrides, "key=value pairs taking precedence over the file");
    sub->add_flag("--print-config", print_config, "print the effective configuration before running");
  }
  app.footer("exit codes: 0 converged/pass, 2 not converged/failed check, 1 usage or config error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qnls::exit_code::usage;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  qnls::Config cfg;
  try {
    cfg = qnls::Config::load(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
  } catch (const qnls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qnls::exit_code::usage;
  }
  if (print_config) {
    for (const auto& [k, v] : cfg.effective()) std::cout << k << " = " << v << '\n';
  }
  return qnls::run_command(subcommand, cfg, std::cout, std::cerr);
}
