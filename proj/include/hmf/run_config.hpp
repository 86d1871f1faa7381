#pragma once

#include <map>
#include <string>
#include <vector>

#include "hmf/grid.hpp"
#include "hmf/target.hpp"

namespace hmf {

// Flat "key = value" configuration with [section] headers. Unknown keys are
// rejected with the offending name. Values are kept as strings in a
// canonical ordered map (the manifest hash is computed over the canonical
// serialization) and parsed on access.
class RunConfig {
 public:
  RunConfig();  // defaults

  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  // "section.key=value" override (repeatable CLI flag)
  void apply_override(const std::string& spec);

  double get_double(const std::string& dotted) const;
  int get_int(const std::string& dotted) const;
  std::string get_string(const std::string& dotted) const;

  int dimension() const { return get_int("run.n"); }
  Target target() const { return Target::parse(get_string("run.target")); }
  RadialGrid make_grid() const;
  RadialGrid make_grid(double rho_max) const;

  // canonical serialization (sorted sections/keys); stable across runs
  std::string canonical() const;
  // FNV-1a 64-bit hash of the canonical serialization, hex-encoded
  std::string manifest_hash() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  void set(const std::string& dotted, const std::string& value, bool must_exist);
  std::map<std::string, std::string> values_;
};

}  // namespace hmf
