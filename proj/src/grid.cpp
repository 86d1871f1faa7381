#include "hmf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmf/errors.hpp"

namespace hmf {

namespace {
void validate(const std::vector<double>& nodes) {
  if (nodes.size() < 8) throw ValidationError("RadialGrid: too few nodes");
  if (!(nodes.front() > 0.0)) throw ValidationError("RadialGrid: rho0 must be positive");
  if (!(nodes.back() >= 10.0)) throw ValidationError("RadialGrid: rho_max must be >= 10");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double d = nodes[i + 1] - nodes[i];
    if (!(d > 0.0)) throw ValidationError("RadialGrid: nodes must be strictly increasing");
    if (d > 0.1 + 1e-12) throw ValidationError("RadialGrid: node spacing exceeds 0.1");
  }
}
}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  validate(nodes_);
}

RadialGrid RadialGrid::geometric_uniform(double rho0, double switch_rho,
                                         double rho_max, double ratio, double h) {
  if (!(rho0 > 0.0) || !(switch_rho > rho0) || !(rho_max > switch_rho))
    throw ValidationError("RadialGrid: need 0 < rho0 < switch_rho < rho_max");
  if (!(ratio > 1.0)) throw ValidationError("RadialGrid: geometric ratio must exceed 1");
  if (!(h > 0.0)) throw ValidationError("RadialGrid: uniform spacing must be positive");
  std::vector<double> nodes;
  double r = rho0;
  while (r < switch_rho) {
    nodes.push_back(r);
    double step = std::min(r * (ratio - 1.0), h);
    r += step;
  }
  // uniform section, landing exactly on rho_max
  std::size_t m = static_cast<std::size_t>(std::ceil((rho_max - switch_rho) / h - 1e-12));
  for (std::size_t i = 0; i <= m; ++i)
    nodes.push_back(switch_rho + (rho_max - switch_rho) * double(i) / double(m));
  return RadialGrid(std::move(nodes));
}

RadialGrid RadialGrid::uniform(double rho0, double rho_max, double h) {
  std::size_t m = static_cast<std::size_t>(std::llround((rho_max - rho0) / h));
  std::vector<double> nodes(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    nodes[i] = rho0 + (rho_max - rho0) * double(i) / double(m);
  return RadialGrid(std::move(nodes));
}

RadialGrid RadialGrid::standard(double rho_max, double h, double rho0) {
  return geometric_uniform(rho0, 1.0, rho_max, 1.03, h);
}

RadialGrid RadialGrid::refined() const {
  std::vector<double> nodes;
  nodes.reserve(2 * nodes_.size());
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    nodes.push_back(nodes_[i]);
    nodes.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  }
  nodes.push_back(nodes_.back());
  return RadialGrid(std::move(nodes));
}

std::size_t RadialGrid::locate(double rho) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), rho);
  if (it == nodes_.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, nodes_.size() - 2);
}

}  // namespace hmf
