#include "hmf/weighted_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmf/errors.hpp"
#include "hmf/fd.hpp"

namespace hmf {

PotentialParams::PotentialParams(int n_, double t_) : n(n_), t(t_) {
  if (n < 3) throw ValidationError("PotentialParams: dimension must satisfy n >= 3");
  if (!(t > 0.0)) throw ValidationError("PotentialParams: time must be positive");
}

double potential_f(double rho, const PotentialParams& p) {
  if (rho < 0.0) throw ValidationError("potential_f: rho must be nonnegative");
  return rho * rho / (4.0 * p.t) + 0.5 * p.n;
}

double check_potential_identity(const RadialGrid& grid, const PotentialParams& p) {
  const std::size_t m = grid.size();
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = potential_f(grid[i], p);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double lf = apply_drift_laplacian(grid, p.n, f, i);
    worst = std::max(worst, std::abs(lf - f[i]));
  }
  return worst;
}

double sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

std::vector<double> simpson_weights_nodes(const std::vector<double>& nodes) {
  const std::size_t m = nodes.size();
  std::vector<double> w(m, 0.0);
  if (m < 2) return w;
  if (m == 2) {  // single interval: trapezoid
    double h = nodes[1] - nodes[0];
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  std::size_t i = 0;
  while (i + 2 < m) {
    double h0 = nodes[i + 1] - nodes[i], h1 = nodes[i + 2] - nodes[i + 1];
    w[i] += (h0 + h1) * (2.0 * h0 - h1) / (6.0 * h0);
    w[i + 1] += (h0 + h1) * (h0 + h1) * (h0 + h1) / (6.0 * h0 * h1);
    w[i + 2] += (h0 + h1) * (2.0 * h1 - h0) / (6.0 * h1);
    i += 2;
  }
  if (i + 2 == m) {
    // odd interval count: parabola through the last three nodes integrated
    // over the final interval
    std::size_t k = m - 1;
    double h0 = nodes[k - 1] - nodes[k - 2], h1 = nodes[k] - nodes[k - 1];
    w[k - 2] += -h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    w[k - 1] += h1 * (h1 + 3.0 * h0) / (6.0 * h0);
    w[k] += h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1));
  }
  return w;
}

std::vector<double> simpson_weights(const RadialGrid& grid) {
  return simpson_weights_nodes(grid.nodes());
}

ScaledValue weighted_integral(const RadialGrid& grid, const ScaledIntegrand& ig,
                              int weight_sign, const PotentialParams& p) {
  if (weight_sign != 1 && weight_sign != -1)
    throw ValidationError("weighted_integral: weight_sign must be +1 or -1");
  if (ig.values.size() != grid.size())
    throw ValidationError("weighted_integral: sample count does not match grid");
  for (double v : ig.values) {
    if (!std::isfinite(v)) throw ValidationError("weighted_integral: non-finite sample");
    if (std::abs(v) > 1e300) throw ValidationError("weighted_integral: sample exceeds 1e300");
  }

  const std::size_t m = grid.size();
  // per-node exponent of the weight (log scale folds rho^(n-1) in so the
  // mantissa stays within range for any dimension)
  std::vector<double> theta(m);
  double theta_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    theta[i] = ig.log_scale + weight_sign * potential_f(grid[i], p) +
               (p.n - 1) * std::log(grid[i]);
    theta_max = std::max(theta_max, theta[i]);
  }

  std::vector<double> w = simpson_weights(grid);
  CompensatedSum acc;
  bool all_zero = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (ig.values[i] != 0.0) all_zero = false;
    acc.add(ig.values[i] * w[i] * std::exp(theta[i] - theta_max));
  }

  ScaledValue out;
  if (all_zero) {
    out.mantissa = 0.0;
    out.log_scale = -std::numeric_limits<double>::infinity();
    out.value = 0.0;
    out.representable = true;
    return out;
  }
  out.mantissa = acc.value();
  out.log_scale = theta_max;
  double lg = theta_max + std::log(std::max(std::abs(out.mantissa),
                                            std::numeric_limits<double>::min()));
  if (out.mantissa == 0.0) {
    out.value = 0.0;
    out.representable = true;
  } else if (lg < 700.0) {
    out.value = out.mantissa * std::exp(theta_max);
    out.representable = std::isfinite(out.value);
  } else {
    out.value = std::numeric_limits<double>::infinity() * (out.mantissa > 0 ? 1 : -1);
    out.representable = false;
    throw SolverError("weighted_integral: result exceeds representable range (log = " +
                      std::to_string(lg) + ")");
  }
  return out;
}

double integrate_samples(const RadialGrid& grid, const std::vector<double>& samples) {
  if (samples.size() != grid.size())
    throw ValidationError("integrate_samples: sample count does not match grid");
  std::vector<double> w = simpson_weights(grid);
  CompensatedSum acc;
  for (std::size_t i = 0; i < samples.size(); ++i) acc.add(samples[i] * w[i]);
  return acc.value();
}

double upper_incomplete_gamma(double s, double x) {
  // Lentz continued fraction, valid for x > s + 1
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 300; ++i) {
    double an = -double(i) * (double(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x)) * h;
}

double gaussian_tail_bound(double sup_ig, double rho_from, const PotentialParams& p) {
  // integral_{R}^inf e^{-rho^2/(4t) - n/2} rho^(n-1) drho
  //   = e^{-n/2} (4t)^{n/2} / 2 * Gamma(n/2, R^2/(4t))
  double x = rho_from * rho_from / (4.0 * p.t);
  double s = 0.5 * p.n;
  double tail = std::exp(-0.5 * p.n) * 0.5 * std::pow(4.0 * p.t, s) *
                upper_incomplete_gamma(s, x);
  return std::abs(sup_ig) * tail;
}

}  // namespace hmf
