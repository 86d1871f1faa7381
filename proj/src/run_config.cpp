#include "hmf/run_config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "hmf/errors.hpp"

namespace hmf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig::RunConfig() {
  values_ = {
      {"run.n", "3"},
      {"run.target", "sphere"},
      {"run.seed", "12345"},
      {"run.out", "out"},
      {"grid.rho0", "1e-4"},
      {"grid.switch_rho", "1"},
      {"grid.rho_max", "40"},
      {"grid.geometric_ratio", "1.03"},
      {"grid.uniform_h", "0.01"},
      {"tolerances.rk_tol", "1e-11"},
      {"tolerances.bv_tol", "1e-10"},
      {"tolerances.kernel_tol", "1e-3"},
      {"tolerances.flow_ds", "0.004"},
      {"sweep.a_min", "-2"},
      {"sweep.a_max", "2"},
      {"sweep.samples", "200"},
      {"sweep.alpha_min", "0.05"},
      {"sweep.alpha_max", "1.5"},
      {"sweep.alpha_samples", "50"},
      {"flow.alpha", "0.3"},
      {"flow.s_end", "10"},
      {"flow.emit_every", "25"},
      {"flow.data", "ramp"},
      {"spectrum.k", "8"},
      {"spectrum.h", "0.01"},
  };
}

void RunConfig::set(const std::string& dotted, const std::string& value, bool must_exist) {
  auto it = values_.find(dotted);
  if (it == values_.end()) {
    if (must_exist) throw ConfigError("unknown config key '" + dotted + "'");
    values_[dotted] = value;
  } else {
    it->second = value;
  }
}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("malformed section header at line " + std::to_string(lineno));
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside any [section]");
    cfg.set(section + "." + key, val, /*must_exist=*/true);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void RunConfig::apply_override(const std::string& spec) {
  std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value, got '" + spec + "'");
  std::string key = trim(spec.substr(0, eq));
  std::string val = trim(spec.substr(eq + 1));
  if (key.find('.') == std::string::npos)
    throw ConfigError("override key '" + key + "' must be section.key");
  set(key, val, /*must_exist=*/true);
}

std::string RunConfig::get_string(const std::string& dotted) const {
  auto it = values_.find(dotted);
  if (it == values_.end()) throw ConfigError("unknown config key '" + dotted + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& dotted) const {
  std::string s = get_string(dotted);
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + dotted + "' is not a number: '" + s + "'");
  }
}

int RunConfig::get_int(const std::string& dotted) const {
  std::string s = get_string(dotted);
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + dotted + "' is not an integer: '" + s + "'");
  }
}

RadialGrid RunConfig::make_grid() const { return make_grid(get_double("grid.rho_max")); }

RadialGrid RunConfig::make_grid(double rho_max) const {
  double rho0 = get_double("grid.rho0");
  double sw = get_double("grid.switch_rho");
  double ratio = get_double("grid.geometric_ratio");
  double h = get_double("grid.uniform_h");
  int n = dimension();
  if (n < 3) throw ConfigError("run.n must be >= 3");
  if (!(rho0 < 1.0 && 1.0 < rho_max)) throw ConfigError("need rho0 < 1 < rho_max");
  for (const char* key : {"tolerances.rk_tol", "tolerances.bv_tol",
                          "tolerances.kernel_tol", "tolerances.flow_ds"})
    if (!(get_double(key) > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  return RadialGrid::geometric_uniform(rho0, sw, rho_max, ratio, h);
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  std::string cur_section;
  for (const auto& [key, val] : values_) {
    std::string section = key.substr(0, key.find('.'));
    std::string name = key.substr(key.find('.') + 1);
    if (section != cur_section) {
      out << "[" << section << "]\n";
      cur_section = section;
    }
    out << name << " = " << val << "\n";
  }
  return out.str();
}

std::string RunConfig::manifest_hash() const {
  std::string s = canonical();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace hmf
