#ifndef BHGL_CONFIG_HPP
#define BHGL_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhgl/engine.hpp"

namespace bhgl {

// Malformed configuration text; line is 0 when the problem is not tied to a
// single line (for example a failed cross-field check).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

// Parses the sectioned key = value format written by format_config. Keys
// not given keep the defaults of `base`.
RunConfig parse_config(const std::string& text, const RunConfig& base = {});
RunConfig load_config(const std::string& path);

std::string format_config(const RunConfig& config);

struct ExperimentPreset {
  std::string name;
  std::string description;
  RunConfig config;
  std::string expectation;
};

const std::vector<ExperimentPreset>& presets();
std::optional<ExperimentPreset> find_preset(const std::string& name);

// Byte-exact shortest round-trip representation.
std::string format_double(double value);

}  // namespace bhgl

#endif  // BHGL_CONFIG_HPP
