#pragma once

#include <cstddef>
#include <vector>

namespace hmf {

// Nonuniform 1-D grid in the self-similar radial variable rho.
// Nodes are strictly increasing, start at rho0 > 0 (where a series start
// hands off to the integrators) and end at rho_max >= 10. Spacing is
// capped at 0.1. The default layout is geometric near the origin (the
// (n-1)/rho and 1/rho^2 coefficients need resolution there) switching to
// uniform spacing at rho = 1.
class RadialGrid {
 public:
  explicit RadialGrid(std::vector<double> nodes);

  // geometric nodes from rho0 to switch_rho (ratio r), then uniform
  // spacing h out to rho_max
  static RadialGrid geometric_uniform(double rho0, double switch_rho,
                                      double rho_max, double ratio, double h);
  static RadialGrid uniform(double rho0, double rho_max, double h);

  // default layout used across the project: rho0 = 1e-4, switch at 1,
  // ratio 1.03, uniform h out to rho_max
  static RadialGrid standard(double rho_max = 40.0, double h = 0.01,
                             double rho0 = 1e-4);

  // midpoint-refined grid (one halving: every cell split in two)
  RadialGrid refined() const;

  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }
  double rho0() const { return nodes_.front(); }
  double rho_max() const { return nodes_.back(); }
  double spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

  // index of the last node <= rho (clamped to valid range)
  std::size_t locate(double rho) const;

  bool same_nodes(const RadialGrid& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<double> nodes_;
};

}  // namespace hmf
