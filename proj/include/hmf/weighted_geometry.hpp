#pragma once

#include <cmath>
#include <vector>

#include "hmf/grid.hpp"

namespace hmf {

// Gaussian potential f(x,t) = |x|^2/(4t) + n/2, normalized so that
// Delta_f f = f at t = 1.
struct PotentialParams {
  int n = 3;
  double t = 1.0;
  PotentialParams(int n_, double t_ = 1.0);
};

double potential_f(double rho, const PotentialParams& p);

// max over interior nodes of |Delta_f f - f| with the second-order
// discretization of f'' + ((n-1)/rho) f' + (rho/2) f' used project-wide;
// O(h^2) under refinement
double check_potential_identity(const RadialGrid& grid, const PotentialParams& p);

// area of the unit sphere S^{n-1}
double sphere_area(int n);

// Neumaier compensated accumulator
class CompensatedSum {
 public:
  void add(double x) {
    double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

// samples scaled by a common exponent: true integrand = values * exp(log_scale)
struct ScaledIntegrand {
  std::vector<double> values;
  double log_scale = 0.0;
};

// quadrature result as mantissa * exp(log_scale); value is the plain real
// when representable
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = -std::numeric_limits<double>::infinity();
  bool representable = true;
  double value = 0.0;
};

// integral of ig(rho) * exp(sign * f(rho)) * rho^(n-1) drho over the grid,
// composite Simpson with local three-point fitting and per-node rescaling
// so no intermediate exceeds the double range
ScaledValue weighted_integral(const RadialGrid& grid, const ScaledIntegrand& ig,
                              int weight_sign, const PotentialParams& p);

// Simpson weights for the grid (shared by the plain quadratures below)
std::vector<double> simpson_weights(const RadialGrid& grid);
std::vector<double> simpson_weights_nodes(const std::vector<double>& nodes);

// plain compensated Simpson quadrature of pre-weighted samples
double integrate_samples(const RadialGrid& grid, const std::vector<double>& samples);

// sup_ig * integral_{rho_from}^inf e^{-f} rho^(n-1) drho (analytic envelope
// via the upper incomplete gamma function)
double gaussian_tail_bound(double sup_ig, double rho_from, const PotentialParams& p);

// upper incomplete gamma Gamma(s, x) by continued fraction (x > s+1)
double upper_incomplete_gamma(double s, double x);

}  // namespace hmf
