#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmf/grid.hpp"
#include "hmf/profile_ode.hpp"
#include "hmf/tridiag.hpp"

namespace hmf {

// Linearization of the reduced static equation about an expander:
//   L v = v'' + ((n-1)/rho + rho/2) v' - V(rho) v,  V = (n-1) g'(h)/rho^2.
// Spectra are computed for -L on L^2(e^f rho^{n-1} drho) after the Liouville
// transform w = rho^{(n-1)/2} e^{f/2} v, which turns -L into the Schroedinger
// operator -w'' + W(rho) w with
//   W = rho^2/16 + n/4 + (n-1)(n-3)/(4 rho^2) + V(rho).
struct JacobiOperator {
  RadialGrid grid;  // uniform spectral grid
  std::vector<double> V;
  int n = 3;
  std::optional<Profile> profile;
};

// spectral grid: uniform spacing h from rho = h to rho_max
JacobiOperator build_operator(const Profile& p, double spectral_h = 0.01);
// scalar drift Laplacian (no angular potential, whole-space radial l = 0)
JacobiOperator build_scalar_operator(int n, double rho_max, double spectral_h = 0.01);

double schroedinger_potential(double rho, double V, int n);

struct SymmetrizedOperator {
  RadialGrid grid;          // spectral grid (all nodes)
  std::vector<double> W;    // Schroedinger potential at interior nodes
  SymTridiag matrix;        // -w'' + W w, Dirichlet ends
};
SymmetrizedOperator symmetrize(const JacobiOperator& op);

struct SpectrumReport {
  RadialGrid grid;
  int n = 3;
  std::vector<double> eigenvalues;  // lowest k of -L, ascending
  std::vector<std::vector<double>> eigenvectors;    // v-form, all grid nodes,
                                                    // normalized in L^2(e^f rho^{n-1})
  std::vector<std::vector<double>> eigenvectors_w;  // w-form, plain L^2-normalized
  double kernel_gap = 0.0;          // min_i |lambda_i|
  std::vector<std::pair<int, double>> traces;  // (index, kappa_inf) for near-kernel modes
};

SpectrumReport spectrum(const JacobiOperator& op, int k, double kernel_tol = 1e-3);

// trace at infinity lim f^{n/2} e^f v of a near-kernel eigenvector
double kernel_trace(const SpectrumReport& report, int index, double kernel_tol = 1e-3);

// number of eigenvalues of -L below Lambda (Sturm count)
std::size_t count_eigenvalues_below(const JacobiOperator& op, double Lambda);

struct KernelSweepPoint {
  double alpha;
  double shoot_param;
  double lambda_min;
  double kernel_gap;
};

struct KernelSweepReport {
  std::vector<KernelSweepPoint> points;
  std::vector<double> crossings;  // alpha values bracketing sign changes of lambda_min
  std::vector<std::pair<double, std::string>> failures;
};

struct KernelSweepOptions {
  int samples = 50;
  int k = 4;
  double kernel_tol = 1e-3;
  double a_lo = 0.0;
  double a_hi = 4.0;
  double spectral_h = 0.01;
  SolveOptions solve;
};

KernelSweepReport kernel_sweep(double alpha_lo, double alpha_hi, int n,
                               const Target& target, const RadialGrid& grid,
                               const KernelSweepOptions& opts = {});

}  // namespace hmf
