#pragma once

#include <cstddef>
#include <vector>

#include "hmf/grid.hpp"

namespace hmf {

// Second-order three-point stencils on a nonuniform grid (interpolating
// parabola), plus the discretization of the radial drift Laplacian
//   L u = u'' + ((n-1)/rho + rho/2) u'
// used by the flow and the potential-identity check. The Laplacian part
// is kept in conservative form with weight rho^(n-1); the drift is added
// pointwise.

// first derivative at interior node i
double d1_nonuniform(const RadialGrid& g, const std::vector<double>& u, std::size_t i);
// second derivative at interior node i
double d2_nonuniform(const RadialGrid& g, const std::vector<double>& u, std::size_t i);

// interior-node sample of all derivative values (endpoints via one-sided
// copies of the adjacent interior value; callers that care use interiors)
std::vector<double> d1_all(const RadialGrid& g, const std::vector<double>& u);

// three-point coefficients of L at interior node i: L u ~ cl*u[i-1] + cc*u[i] + cr*u[i+1]
struct DriftRow {
  double cl, cc, cr;
};
DriftRow drift_laplacian_row(const RadialGrid& g, int n, std::size_t i);

// apply L at interior node i
double apply_drift_laplacian(const RadialGrid& g, int n, const std::vector<double>& u,
                             std::size_t i);

// cubic Hermite evaluation of (value, derivative) samples at arbitrary rho
// inside the grid range (clamped at the ends)
double hermite_value(const RadialGrid& g, const std::vector<double>& u,
                     const std::vector<double>& du, double rho);
double hermite_derivative(const RadialGrid& g, const std::vector<double>& u,
                          const std::vector<double>& du, double rho);

}  // namespace hmf
