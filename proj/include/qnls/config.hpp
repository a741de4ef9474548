#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnls {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ValueType { number, integer, string, number_list, string_list };

struct KeySpec {
  std::string key;
  ValueType type;
  std::string fallback;  ///< textual default; empty with optional = true means "absent"
  std::string help;
  bool optional = false;
};

/// Every key the configuration accepts, with types and defaults.
const std::vector<KeySpec>& config_schema();

/// Flat `section.key = value` configuration with `#` comments and optional double quotes.
/// Unknown keys and values of the wrong type raise ConfigError naming the key.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  /// `key=value`; overrides take precedence over file values.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::string string(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;

  /// Effective values (explicit plus defaults), sorted by key.
  std::map<std::string, std::string> effective() const;

 private:
  const KeySpec& spec(const std::string& key) const;
  std::string raw(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

}  // namespace qnls
