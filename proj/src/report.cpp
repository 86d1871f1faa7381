#include "hmf/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmf/errors.hpp"

namespace hmf {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::string& manifest_hash,
                     const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) throw SolverError("cannot open output file '" + path + "'");
  impl_->out << "# manifest=" << manifest_hash << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    impl_->out << header[i] << (i + 1 < header.size() ? "," : "");
  impl_->out << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    impl_->out << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
  impl_->out << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "");
  impl_->out << "\n";
}

void CsvWriter::close() {
  if (impl_ && impl_->out.is_open()) impl_->out.close();
}

CsvWriter::~CsvWriter() {
  close();
  delete impl_;
}

void save_profile(const Profile& p, const std::string& csv_path,
                  const std::string& json_path, const std::string& manifest_hash) {
  {
    CsvWriter csv(csv_path, manifest_hash, {"rho", "h", "dh"});
    for (std::size_t i = 0; i < p.grid.size(); ++i)
      csv.row({p.grid[i], p.h[i], p.dh[i]});
  }
  nlohmann::ordered_json j;
  j["manifest"] = manifest_hash;
  j["n"] = p.n;
  j["target"] = p.target.name();
  j["shoot_param"] = p.shoot_param;
  j["alpha_inf"] = p.alpha_inf;
  j["c2"] = p.c2;
  j["rk_tol"] = p.rk_tol;
  std::ofstream out(json_path, std::ios::binary);
  if (!out) throw SolverError("cannot open output file '" + json_path + "'");
  out << j.dump(2) << "\n";
}

Profile load_profile(const std::string& csv_path, const std::string& json_path) {
  std::ifstream jin(json_path);
  if (!jin) throw ValidationError("cannot open profile file '" + json_path + "'");
  nlohmann::json j;
  try {
    jin >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("profile json '" + json_path + "' does not parse: " + e.what());
  }

  std::ifstream cin(csv_path);
  if (!cin) throw ValidationError("cannot open profile file '" + csv_path + "'");
  std::vector<double> rho, h, dh;
  std::string line;
  while (std::getline(cin, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("rho", 0) == 0) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) {
      double v;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc())
        throw ValidationError("profile csv '" + csv_path + "': bad number '" + cell + "'");
      cells.push_back(v);
    }
    if (cells.size() != 3)
      throw ValidationError("profile csv '" + csv_path + "': expected 3 columns");
    rho.push_back(cells[0]);
    h.push_back(cells[1]);
    dh.push_back(cells[2]);
  }
  Profile p{RadialGrid(std::move(rho)),
            std::move(h),
            std::move(dh),
            j.at("n").get<int>(),
            Target::parse(j.at("target").get<std::string>()),
            j.at("shoot_param").get<double>(),
            j.at("alpha_inf").get<double>(),
            j.at("c2").get<double>(),
            j.at("rk_tol").get<double>(),
            std::nullopt};
  if (p.h.size() != p.grid.size() || p.dh.size() != p.grid.size())
    throw ValidationError("profile csv '" + csv_path + "': ragged columns");
  return p;
}

}  // namespace hmf
