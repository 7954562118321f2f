#include "bhgl/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bhgl {

ConfigError::ConfigError(int line, const std::string& key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : "'" + key + "': ") + message),
      line_(line),
      key_(key) {}

std::string format_double(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(line, key, "expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& v, int line, const std::string& key) {
  int out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(line, key, "expected an integer, got '" + v + "'");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int, const std::string&)>;

Setter real(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& v, int line, const std::string& key) {
    c.*field = to_double(v, line, key);
  };
}

Setter policy_real(double ControlPolicy::*field) {
  return [field](RunConfig& c, const std::string& v, int line, const std::string& key) {
    c.policy.*field = to_double(v, line, key);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.name", [](RunConfig& c, const std::string& v, int, const std::string&) { c.name = v; }},
      {"backend.type",
       [](RunConfig& c, const std::string& v, int line, const std::string& key) {
         try {
           c.backend = parse_backend(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(line, key, e.what());
         }
       }},
      {"backend.N",
       [](RunConfig& c, const std::string& v, int line, const std::string& key) {
         c.N = to_int(v, line, key);
       }},
      {"backend.N2", real(&RunConfig::N2)},
      {"backend.memory_cap_mb", real(&RunConfig::memory_cap_mb)},
      {"policy.variant",
       [](RunConfig& c, const std::string& v, int line, const std::string& key) {
         try {
           c.policy.variant = parse_control_variant(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(line, key, e.what());
         }
       }},
      {"policy.gamma", policy_real(&ControlPolicy::gamma)},
      {"policy.J12", policy_real(&ControlPolicy::J12)},
      {"policy.g", real(&RunConfig::g)},
      {"policy.U", real(&RunConfig::U_override)},
      {"policy.epsilon_breakdown", policy_real(&ControlPolicy::epsilon_breakdown)},
      {"initial.n", real(&RunConfig::n)},
      {"initial.n0", real(&RunConfig::n0)},
      {"initial.n3", real(&RunConfig::n3)},
      {"integrator.t_end", real(&RunConfig::t_end)},
      {"integrator.abs_tol", real(&RunConfig::abs_tol)},
      {"integrator.rel_tol", real(&RunConfig::rel_tol)},
      {"output.sample_dt", real(&RunConfig::sample_dt)},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig c = base;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "", "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(line, "", "empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "", "missing key");
    if (section.empty()) throw ConfigError(line, key, "key outside of any [section]");
    const std::string full = section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ConfigError(line, full, "unknown key");
    if (value.empty()) throw ConfigError(line, full, "missing value");
    it->second(c, value, line, full);
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "", e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[run]\nname = " << c.name << "\n\n";
  os << "[backend]\ntype = " << to_string(c.backend) << "\nN = " << c.N
     << "\nN2 = " << format_double(c.N2) << "\nmemory_cap_mb = " << format_double(c.memory_cap_mb)
     << "\n\n";
  os << "[policy]\nvariant = " << to_string(c.policy.variant)
     << "\ngamma = " << format_double(c.policy.gamma) << "\nJ12 = " << format_double(c.policy.J12)
     << "\ng = " << format_double(c.g);
  if (c.U_override != 0.0) os << "\nU = " << format_double(c.U_override);
  os << "\nepsilon_breakdown = " << format_double(c.policy.epsilon_breakdown) << "\n\n";
  os << "[initial]\nn = " << format_double(c.n) << "\nn0 = " << format_double(c.n0)
     << "\nn3 = " << format_double(c.n3) << "\n\n";
  os << "[integrator]\nt_end = " << format_double(c.t_end)
     << "\nabs_tol = " << format_double(c.resolved_abs_tol())
     << "\nrel_tol = " << format_double(c.resolved_rel_tol()) << "\n\n";
  os << "[output]\nsample_dt = " << format_double(c.sample_dt) << "\n";
  return os.str();
}

namespace {

RunConfig figure_config(const std::string& name, Backend backend, ControlVariant variant, int N,
                        double N2) {
  RunConfig c;
  c.name = name;
  c.backend = backend;
  c.policy.variant = variant;
  c.policy.gamma = 0.5;
  c.policy.J12 = 1.0;
  c.g = 0.1;
  c.N = N;
  c.N2 = N2;
  c.n = N2 / 2.0;
  c.n0 = 5.0 * N2;
  c.n3 = 5.0 * N2;
  c.t_end = 12.0;
  c.sample_dt = 0.05;
  return c;
}

}  // namespace

const std::vector<ExperimentPreset>& presets() {
  static const std::vector<ExperimentPreset> list = {
      {"fig2", "exact Bose-Hubbard, N = 110, mean-field-derived controllers",
       figure_config("fig2", Backend::kExactBH, ControlVariant::kFeedbackMB, 110, 10.0),
       "breakdown in (7, 9) caused by jt23; c01 = c23 = 0 throughout"},
      {"fig4", "exact Bose-Hubbard, N = 110, balanced gain and loss",
       figure_config("fig4", Backend::kExactBH, ControlVariant::kFeedbackBGL, 110, 10.0),
       "n1, n2, jt12 stationary until a breakdown caused by jt01 before t = 10"},
      {"fig5", "BBR closure, N = 1100, balanced gain and loss",
       figure_config("fig5", Backend::kBBR, ControlVariant::kFeedbackBGL, 1100, 100.0),
       "breakdown in (9, 10); purities start at 1 and decrease"},
      {"mf-reference", "four-mode mean field with the closed-form schedule",
       figure_config("mf-reference", Backend::kFourModeMF, ControlVariant::kAnalyticMF, 110, 10.0),
       "flat n1 = n2 = 5 until the left reservoir empties at t = 10"},
      {"pt-dimer", "isolated PT-symmetric double well",
       [] {
         RunConfig c = figure_config("pt-dimer", Backend::kTwoModeMF, ControlVariant::kFeedbackMF,
                                     110, 10.0);
         c.t_end = 50.0;
         return c;
       }(),
       "stationary n1 = n2 for all times"},
  };
  return list;
}

std::optional<ExperimentPreset> find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace bhgl
