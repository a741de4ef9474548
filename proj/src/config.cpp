#include "qnls/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qnls {

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = {
      {"problem.N", ValueType::integer, "3", "space dimension, >= 3"},
      {"problem.p", ValueType::number, "2", "exponent, 1 < p < (3N+2)/(N-2)"},
      {"grid.r_max", ValueType::number, "20", "truncation radius"},
      {"grid.n", ValueType::integer, "801", "number of nodes"},
      {"grid.spacing", ValueType::string, "uniform", "uniform | graded"},
      {"grid.ratio", ValueType::number, "1", "last/first cell width for graded grids"},
      {"potential.kind", ValueType::string, "constant",
       "constant | shifted_lorentz | shifted_gaussian | oscillatory"},
      {"potential.omega", ValueType::number, "", "shift", true},
      {"potential.a", ValueType::number, "", "amplitude", true},
      {"potential.k", ValueType::number, "", "power or frequency", true},
      {"solver.init", ValueType::string, "gaussian", "gaussian | bump | file"},
      {"solver.init_width", ValueType::number, "2", "gaussian width"},
      {"solver.init_radius", ValueType::number, "6", "bump radius"},
      {"solver.init_file", ValueType::string, "", "two-column r u profile"},
      {"solver.max_iters", ValueType::integer, "4000", "iteration cap"},
      {"solver.step0", ValueType::number, "1", "initial descent step"},
      {"solver.tol_weak", ValueType::number, "1e-4", "weak residual / ||u||_H1"},
      {"solver.tol_J", ValueType::number, "1e-8", "|J(u)|"},
      {"solver.tol_tangent", ValueType::number, "1e-6", "tangential residual / ||u||_H1"},
      {"output.dir", ValueType::string, "out", "output directory"},
      {"output.formats", ValueType::string_list, "csv,json", "subset of csv, json"},
      {"fiber.t_min", ValueType::number, "0.01", "smallest scanned t"},
      {"fiber.t_max", ValueType::number, "100", "largest scanned t"},
      {"fiber.points", ValueType::integer, "201", "fiber scan samples"},
      {"hypotheses.r_max", ValueType::number, "20", "largest sampled radius"},
      {"hypotheses.r_samples", ValueType::integer, "64", "sampled radii"},
      {"hypotheses.s_min", ValueType::number, "1e-3", "smallest s"},
      {"hypotheses.s_max", ValueType::number, "1e3", "largest s"},
      {"hypotheses.s_points", ValueType::integer, "64", "s ladder size"},
      {"hypotheses.tail_points", ValueType::integer, "16", "tail radii beyond r_max"},
      {"hypotheses.tolerance", ValueType::number, "1e-9", "slack for the (V3) sign test"},
      {"pohozaev.a_values", ValueType::number_list, "-1,0,1", "parameters a of the identity family"},
      {"oracle.dr", ValueType::number, "1e-3", "shooting step"},
      {"oracle.r_max", ValueType::number, "40", "shooting range"},
      {"sweep.p_values", ValueType::number_list, "1.5,2,2.5,3", "exponents solved by sweep"},
      {"sweep.seed", ValueType::integer, "12345", "seed for randomized initial widths"},
      {"sweep.workers", ValueType::integer, "0", "OpenMP threads, 0 = runtime default"},
  };
  return schema;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& v, const std::string& where) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.find('"') != std::string::npos) throw ConfigError(where + ": unbalanced quotes");
  return v;
}

double to_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(std::string text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') text = text.substr(1, text.size() - 2);
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void check_type(const KeySpec& spec, const std::string& value) {
  switch (spec.type) {
    case ValueType::number:
      to_number(spec.key, value);
      break;
    case ValueType::integer: {
      const double v = to_number(spec.key, value);
      if (v != std::floor(v)) throw ConfigError("key '" + spec.key + "': expected an integer, got '" + value + "'");
      break;
    }
    case ValueType::number_list:
      for (const auto& item : split_list(value)) to_number(spec.key, item);
      break;
    case ValueType::string:
    case ValueType::string_list:
      break;
  }
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const std::string where = origin + ":" + std::to_string(number);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = unquote(trim(body.substr(eq + 1)), where);
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
  set(trim(assignment.substr(0, eq)), unquote(trim(assignment.substr(eq + 1)), "override '" + assignment + "'"));
}

void Config::set(const std::string& key, const std::string& value) {
  check_type(spec(key), value);
  values_[key] = value;
}

const KeySpec& Config::spec(const std::string& key) const {
  const auto& schema = config_schema();
  const auto it = std::find_if(schema.begin(), schema.end(), [&](const KeySpec& s) { return s.key == key; });
  if (it == schema.end()) throw ConfigError("unknown key '" + key + "'");
  return *it;
}

bool Config::has(const std::string& key) const {
  const auto& s = spec(key);
  return values_.count(key) > 0 || !s.optional;
}

std::string Config::raw(const std::string& key) const {
  const auto& s = spec(key);
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  if (s.optional) throw ConfigError("key '" + key + "' is not set");
  return s.fallback;
}

double Config::number(const std::string& key) const { return to_number(key, raw(key)); }

long long Config::integer(const std::string& key) const { return static_cast<long long>(to_number(key, raw(key))); }

std::string Config::string(const std::string& key) const { return raw(key); }

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) out.push_back(to_number(key, item));
  return out;
}

std::vector<std::string> Config::strings(const std::string& key) const { return split_list(raw(key)); }

std::map<std::string, std::string> Config::effective() const {
  std::map<std::string, std::string> out;
  for (const auto& s : config_schema()) {
    if (values_.count(s.key)) {
      out[s.key] = values_.at(s.key);
    } else if (!s.optional) {
      out[s.key] = s.fallback;
    }
  }
  return out;
}

}  // namespace qnls
