#pragma once

#include <optional>
#include <vector>

#include "hmf/flow_pde.hpp"
#include "hmf/grid.hpp"
#include "hmf/profile_ode.hpp"

namespace hmf {

// Relative entropy, dissipation, Pohozaev/frequency quantities, decay fits
// and the trace at infinity, all in the equivariant reduction. Convention:
// every weighted integral uses the full weight e^{f} rho^{n-1} with
// f = rho^2/4 + n/2 and the prefactor C_n = omega_{n-1} / (4 pi)^{n/2};
// the entropy carries the full energy density |grad u|^2 so that
// dE/ds = -dissipation holds exactly along the flow.

struct EntropyReport {
  double value = 0.0;      // relative entropy E(a, b)
  double value_ibp = 0.0;  // same value via the integration-by-parts route
  double dissipation = 0.0;  // nonnegative obstruction integral at the slice
  // magnitudes of the integration-by-parts pieces: second-fundamental-form
  // bulk term, obstruction bulk term, sphere boundary term
  double audit_a_term = 0.0;
  double audit_obstruction_term = 0.0;
  double audit_boundary_term = 0.0;
  double truncation_bound = 0.0;  // analytic tail estimate beyond the cut
  double rho_cut = 0.0;           // radius the integrals actually extend to
};

struct FrequencyReport {
  std::vector<double> radii;
  std::vector<double> frequency;       // N(R)
  double pohozaev_residual = 0.0;      // differentiated identity, analytic d/dR
  double pohozaev_fd_residual = 0.0;   // same with centered differences in R
  bool strictly_increasing = false;
};

struct DecayFit {
  double window_lo = 0.0;
  double window_hi = 0.0;
  double trace = 0.0;         // c12, signed
  double fit_residual = 0.0;  // RMS defect of the log-linear model
  bool model_adequate = false;  // fit_residual <= 0.05
};

// pointwise energy density e(u) = (h'^2 + (n-1) q(h)/rho^2)/2
double energy_density(double rho, double h, double dh, int n, const Target& target);
double energy_density(const Profile& p, double rho);

// relative entropy of two states over the same grid attaining the same
// boundary angle (to 1e-6); b must be an expander profile
EntropyReport relative_entropy(const Profile& a, const Profile& b, double t = 1.0);
EntropyReport relative_entropy(const FlowState& a, const Profile& b, double t = 1.0);

// dissipation 2 C_n \int o^2 e^f rho^{n-1} drho of a slice pair
double dissipation(const FlowState& state, const FlowState& prev, double t = 1.0);

// difference-first entropy increment E(state) - E(prev) between consecutive
// slices (shares its integration domain with `dissipation`)
double entropy_increment(const FlowState& state, const FlowState& prev);

FrequencyReport frequency(const Profile& p, const std::vector<double>& radii);

// cumulative angular energy y(R) = omega \int_0^R (n-1) q(h) e^f rho^{n-1} drho
// (the Gronwall quantity y' >= (R/2) y for expanders)
double angular_energy_integral(const Profile& p, double radius);

DecayFit decay_fit(const Profile& p1, const Profile& p2);
// decay fit of arbitrary difference samples against the envelope
// c * f^{-n/2} e^{-beta f}; beta = 1 is the sharp exponent
DecayFit decay_fit_samples(const RadialGrid& grid, const std::vector<double>& diff, int n,
                           double beta = 1.0);

// k = 1 regularity check of the rescaled difference U = f^{n/2} e^f (h1 - h2):
// sup sqrt(f) |U'| / sup |U| over the fit window
double rescaled_difference_check(const Profile& p1, const Profile& p2);

// entropy normalization C_n = omega_{n-1) / (4 pi)^{n/2}
double entropy_prefactor(int n);

}  // namespace hmf
