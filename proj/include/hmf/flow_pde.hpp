#pragma once

#include <vector>

#include "hmf/grid.hpp"
#include "hmf/profile_ode.hpp"
#include "hmf/target.hpp"

namespace hmf {

// Time slice of the equivariant flow in self-similar coordinates (rho, s).
// Steady states of the evolution are exactly the expander profiles.
struct FlowState {
  RadialGrid grid;
  std::vector<double> h;
  double s = 0.0;  // log time
  int n = 3;
  Target target;
  double alpha = 0.0;  // boundary angle; rho_max is pinned to the
                       // asymptotically corrected value alpha + c2/rho_max^2
};

// equivariant scalar of the obstruction tensor t du/dt + (x/2).grad u,
// sampled on the state grid
struct ObstructionField {
  RadialGrid grid;
  std::vector<double> values;
  double s = 0.0;
};

// constant-angle 0-homogeneous data, mollified by a quintic ramp on [0,1]
FlowState init_homogeneous(double alpha, int n, const Target& target,
                           const RadialGrid& grid);

// value of the quintic ramp (0 at 0, 1 from rho = 1 on)
double mollifier_ramp(double rho);

// data equal to a background expander away from the origin with the same
// quintic mollification applied near it: h0 = ramp * h_bg. Used when the
// relative entropy against bg must be finite from the first slice (the
// difference stays in the fast-decay class).
FlowState init_mollified_profile(const Profile& bg);

// a profile transported onto the flow discretization; `polish` runs Newton
// on the discrete steady-state equation so the result is a fixed point of
// step() to rounding
FlowState flow_state_from_profile(const Profile& p, bool polish = true);

// one IMEX step: drift Laplacian implicit (Crank-Nicolson weights, one
// tridiagonal solve), nonlinearity -(n-1) g(h)/rho^2 explicit at a predicted
// midpoint. ds in (0, 0.1].
FlowState step(const FlowState& state, double ds);

// pure relabeling s -> s + 2 log(lambda) of the parabolic rescaling
FlowState rescale(const FlowState& state, double lambda);

// discrete steady-state residual ||L h - N(h)||_inf over interior nodes
double steady_residual(const FlowState& state);

// difference quotient of two consecutive slices (fixed rho): the equivariant
// obstruction scalar of the physical flow
ObstructionField obstruction(const FlowState& state, const FlowState& prev);

struct BlowDownResult {
  FlowState limit;
  Profile limit_profile;            // final slice reinterpreted as a profile
  std::vector<double> s_history;    // slice times
  std::vector<double> residual_history;  // ||ds h||_inf per unit s
  bool converged = false;
};

// iterate step() to s_end and return the final slice plus the steady-state
// residual trace; residual must fall below 1e-5 and decrease monotonically
// over the last half of the run
BlowDownResult blow_down(const FlowState& state0, double s_end, double ds);

// boundary value pinned at rho_max (alpha + c2/rho_max^2)
double pinned_boundary_value(double alpha, int n, const Target& target, double rho_max);

}  // namespace hmf
