#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnls/commands.hpp"
#include "qnls/config.hpp"

using namespace qnls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qnls_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Config small_solve(const fs::path& dir) {
  auto cfg = Config::parse(
      "problem.N = 3\n"
      "problem.p = 2   # quadratic\n"
      "grid.r_max = 20\n"
      "grid.n = 801\n"
      "potential.kind = \"constant\"\n"
      "potential.omega = 1\n");
  cfg.set("output.dir", dir.string());
  return cfg;
}

}  // namespace

TEST_CASE("config parsing reports the offending key and line") {
  CHECK_THROWS_WITH_AS(Config::parse("problem.N = 3\nfoo.bar = 1\n", "a.cfg"), doctest::Contains("a.cfg:2"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("foo.bar = 1\n"), doctest::Contains("unknown key 'foo.bar'"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("grid.n = many\n"), doctest::Contains("grid.n"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("grid.n = 8.5\n"), doctest::Contains("integer"), ConfigError);
  CHECK_THROWS_AS(Config::parse("grid.n 801\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("potential.kind = \"constant\n"), ConfigError);
}

TEST_CASE("defaults, lists, comments and overrides") {
  auto cfg = Config::parse("# header\nproblem.p = 3 # trailing\npohozaev.a_values = [-2, 0.5]\n");
  CHECK(cfg.number("problem.p") == 3.0);
  CHECK(cfg.integer("grid.n") == 801);
  CHECK(cfg.numbers("pohozaev.a_values") == std::vector<double>{-2.0, 0.5});
  CHECK(cfg.strings("output.formats") == std::vector<std::string>{"csv", "json"});
  CHECK_FALSE(cfg.has("potential.a"));
  CHECK_THROWS_AS(cfg.number("potential.a"), ConfigError);

  cfg.apply_override("problem.p=2.5");
  CHECK(cfg.number("problem.p") == 2.5);
  CHECK_THROWS_AS(cfg.apply_override("problem.p"), ConfigError);
  CHECK_THROWS_AS(cfg.apply_override("nope=1"), ConfigError);

  const auto eff = cfg.effective();
  CHECK(eff.at("problem.p") == "2.5");
  CHECK(eff.at("grid.r_max") == "20");
  CHECK(eff.count("potential.a") == 0);
}

TEST_CASE("every subcommand is listed and unknown ones are usage errors") {
  const auto& subs = subcommands();
  for (const char* s : {"solve", "fiber-scan", "check-potential", "pohozaev", "oracle-compare", "sweep"}) {
    CHECK(std::find(subs.begin(), subs.end(), s) != subs.end());
  }
  std::ostringstream out, err;
  CHECK(run_command("frobnicate", Config{}, out, err) == exit_code::usage);
}

TEST_CASE("an exponent above the admissible range is a config error naming the bound") {
  const auto dir = scratch("p12");
  auto cfg = small_solve(dir);
  cfg.set("problem.p", "12");
  std::ostringstream out, err;
  CHECK(run_command("solve", cfg, out, err) == exit_code::usage);
  CHECK(err.str().find("11") != std::string::npos);
}

TEST_CASE("a potential violating the lower bound is reported with exit code 2") {
  const auto dir = scratch("osc");
  auto cfg = Config::parse(
      "potential.kind = oscillatory\npotential.omega = 2\npotential.a = 1\npotential.k = 1\n");
  cfg.set("output.dir", dir.string());
  std::ostringstream out, err;
  CHECK(run_command("check-potential", cfg, out, err) == exit_code::failed);
  CHECK(fs::exists(dir / "report.json"));
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK_FALSE(report["hypotheses"]["v1_ok"].get<bool>());
  CHECK(fs::exists(dir / "witnesses.csv"));

  std::ostringstream out2, err2;
  CHECK(run_command("solve", cfg, out2, err2) == exit_code::failed);
}

TEST_CASE("solve writes a reproducible report, profile and history") {
  const auto dir = scratch("solve");
  const auto cfg = small_solve(dir);
  std::ostringstream out, err;
  REQUIRE(run_command("solve", cfg, out, err) == exit_code::ok);
  const auto line = out.str();
  CHECK(line.rfind("solve:", 0) == 0);
  CHECK(std::count(line.begin(), line.end(), '\n') == 1);

  const auto first = slurp(dir / "report.json");
  const auto report = nlohmann::json::parse(first);
  CHECK(report["converged"].get<bool>());
  CHECK(report["m"].get<double>() > 0.0);
  CHECK(report["pohozaev"].size() == 3);
  CHECK(report.contains("schema_version"));
  CHECK(slurp(dir / "u_star.txt").rfind("# r u\n", 0) == 0);
  CHECK(slurp(dir / "history.csv").rfind("iteration,energy,J,weak_residual,tangent_residual\n", 0) == 0);

  std::ostringstream out2, err2;
  REQUIRE(run_command("solve", cfg, out2, err2) == exit_code::ok);
  CHECK(slurp(dir / "report.json") == first);
}

TEST_CASE("output.formats restricts what is written") {
  const auto dir = scratch("formats");
  auto cfg = small_solve(dir);
  cfg.set("output.formats", "json");
  std::ostringstream out, err;
  REQUIRE(run_command("solve", cfg, out, err) == exit_code::ok);
  CHECK(fs::exists(dir / "report.json"));
  CHECK_FALSE(fs::exists(dir / "history.csv"));

  cfg.set("output.formats", "xml");
  std::ostringstream out2, err2;
  CHECK(run_command("solve", cfg, out2, err2) == exit_code::usage);
}
