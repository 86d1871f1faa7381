#pragma once

#include <string>
#include <vector>

#include "hmf/profile_ode.hpp"
#include "hmf/run_config.hpp"

namespace hmf {

// CSV emission with shortest round-trip decimal formatting (byte-stable) and
// the manifest hash on a leading comment line.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& manifest_hash,
            const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  void close();
  ~CsvWriter();

 private:
  struct Impl;
  Impl* impl_;
};

// shortest decimal representation that round-trips to the same double
std::string format_double(double v);

// profile persistence: CSV with columns rho, h, dh plus a JSON side file
// with the scalar fields; round-trips bit-exactly
void save_profile(const Profile& p, const std::string& csv_path,
                  const std::string& json_path, const std::string& manifest_hash);
Profile load_profile(const std::string& csv_path, const std::string& json_path);

}  // namespace hmf
