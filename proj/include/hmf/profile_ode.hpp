#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmf/grid.hpp"
#include "hmf/target.hpp"

namespace hmf {

// Equivariant expander candidate: angle h(rho) and slope h'(rho) on a grid,
// produced by shooting the reduced static equation
//   h'' = -((n-1)/rho + rho/2) h' + (n-1) g(h)/rho^2
// from a series start at the origin.
struct Profile {
  RadialGrid grid;
  std::vector<double> h;
  std::vector<double> dh;
  int n = 3;
  Target target;
  double shoot_param = 0.0;   // a = h'(0)
  double alpha_inf = 0.0;     // attained boundary angle
  double c2 = 0.0;            // coefficient of the 1/rho^2 far-field term
  double rk_tol = 1e-11;
  std::optional<double> trace_coeff;  // set only for differences of profiles

  bool is_constant() const;
  // sup_rho sqrt(f) * |grad u| (equivariant form); finite for expanders
  double gradient_decay_constant() const;
};

// right-hand side h'' of the reduced static equation
double profile_rhs(double rho, double h, double dh, int n, const Target& target);

// two-term odd Frobenius start h = a rho + c3 rho^3 at rho0
struct SeriesStart {
  double h;
  double dh;
};
SeriesStart series_start(double a, int n, const Target& target, double rho0);
double series_c3(double a, int n, const Target& target);

struct ShootOptions {
  double rk_tol = 1e-11;
  double blowup_threshold = 50.0;  // hyperbolic guard: sinh overflow
};

// adaptive Dormand-Prince 5(4) integration from the series start to rho_max,
// sampling on the grid; sets alpha_inf and c2 by the far-field fit
Profile shoot(double a, int n, const Target& target, const RadialGrid& grid,
              const ShootOptions& opts = {});

// far-field fit h ~ alpha + c2/rho^2 over [win_lo, win_hi]*rho_max
struct Asymptotics {
  double alpha_inf;
  double c2;
  std::optional<double> trace_coeff;  // absent here; see entropy_diagnostics
};
Asymptotics asymptotics(const Profile& p, double win_lo = 0.6, double win_hi = 0.9);

// a-posteriori ODE defect per cell: re-integrates each grid cell with two
// half steps of the embedded pair at the same tolerance and reports the
// largest per-unit-length endpoint discrepancy
double ode_defect(const Profile& p);

// max interior |h'' - profile_rhs| with h'' from centered differences of dh;
// limited by the grid (O(h^2) * |h''''|), reported for audit purposes
double fd_residual(const Profile& p);

struct BoundaryValueSolutionSet {
  double alpha_target = 0.0;
  std::vector<Profile> profiles;
  // examined sign-change brackets in the shooting parameter
  std::vector<std::pair<double, double>> bracket_log;
  // sweep samples (a, alpha_inf) that succeeded, in parameter order
  std::vector<std::pair<double, double>> sweep;
  // sweep parameters that failed (blow-up etc.), with diagnostics
  std::vector<std::pair<double, std::string>> failures;
};

struct SolveOptions {
  int sweep_samples = 200;
  double bv_tol = 1e-10;
  ShootOptions shoot;
};

// dense sweep of a -> alpha_inf(a) plus bisection on every bracket; returns
// all roots as Profiles (an empty set is a valid result)
BoundaryValueSolutionSet solve_boundary_value(double alpha, int n, const Target& target,
                                              double a_lo, double a_hi,
                                              const RadialGrid& grid,
                                              const SolveOptions& opts = {});

// universal 1/rho^2 far-field coefficient of an expander with boundary
// angle alpha: c2 = -(n-1) g(alpha)
double far_field_c2(double alpha, int n, const Target& target);

}  // namespace hmf
