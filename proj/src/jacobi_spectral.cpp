#include "hmf/jacobi_spectral.hpp"

#include <algorithm>
#include <cmath>

#include "hmf/entropy_diagnostics.hpp"
#include "hmf/errors.hpp"
#include "hmf/fd.hpp"
#include "hmf/weighted_geometry.hpp"

namespace hmf {

double schroedinger_potential(double rho, double V, int n) {
  return rho * rho / 16.0 + 0.25 * n + (n - 1) * (n - 3) / (4.0 * rho * rho) + V;
}

JacobiOperator build_operator(const Profile& p, double spectral_h) {
  RadialGrid sg = RadialGrid::uniform(spectral_h, p.grid.rho_max(), spectral_h);
  std::vector<double> V(sg.size());
  for (std::size_t i = 0; i < sg.size(); ++i) {
    double rho = sg[i];
    double h = rho < p.grid.rho0() ? p.h.front() * (rho / p.grid.rho0())
                                   : hermite_value(p.grid, p.h, p.dh, rho);
    V[i] = (p.n - 1) * p.target.gp(h) / (rho * rho);
  }
  return JacobiOperator{std::move(sg), std::move(V), p.n, p};
}

JacobiOperator build_scalar_operator(int n, double rho_max, double spectral_h) {
  RadialGrid sg = RadialGrid::uniform(spectral_h, rho_max, spectral_h);
  // l = 0 radial sector: no angular potential, and no centrifugal term either
  // (the (n-1)(n-3)/(4 rho^2) piece of W is added by symmetrize; for the
  // scalar operator it belongs, it is part of the n-dimensional radial
  // Laplacian)
  std::vector<double> V(sg.size(), 0.0);
  return JacobiOperator{std::move(sg), std::move(V), n, std::nullopt};
}

SymmetrizedOperator symmetrize(const JacobiOperator& op) {
  const RadialGrid& g = op.grid;
  const std::size_t m = g.size();
  if (m < 3) throw ValidationError("symmetrize: spectral grid too small");
  const double h = g.spacing(0);
  const std::size_t ni = m - 2;  // Dirichlet at both ends
  std::vector<double> W(ni), diag(ni), off(ni - 1);
  for (std::size_t i = 0; i < ni; ++i) {
    double rho = g[i + 1];
    W[i] = schroedinger_potential(rho, op.V[i + 1], op.n);
    diag[i] = 2.0 / (h * h) + W[i];
  }
  for (std::size_t i = 0; i + 1 < ni; ++i) off[i] = -1.0 / (h * h);
  return SymmetrizedOperator{g, std::move(W), SymTridiag(std::move(diag), std::move(off))};
}

SpectrumReport spectrum(const JacobiOperator& op, int k, double kernel_tol) {
  if (k < 1 || k > 20) throw ValidationError("spectrum: eigenpair count must be in [1, 20]");
  SymmetrizedOperator sym = symmetrize(op);
  const RadialGrid& g = op.grid;
  const std::size_t m = g.size();
  PotentialParams pp(op.n, 1.0);

  SpectrumReport rep{g, op.n, {}, {}, {}, 0.0, {}};
  rep.eigenvalues.reserve(k);
  double gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    double lam = sym.matrix.eigenvalue(static_cast<std::size_t>(j));
    std::vector<double> wv = sym.matrix.eigenvector(lam);
    // w-form on all nodes (zeros at the Dirichlet ends), L2-normalized with
    // the trapezoid/Simpson measure so that the v-form has unit weighted norm
    std::vector<double> wfull(m, 0.0);
    for (std::size_t i = 0; i + 2 < m; ++i) wfull[i + 1] = wv[i];
    std::vector<double> w2(m);
    for (std::size_t i = 0; i < m; ++i) w2[i] = wfull[i] * wfull[i];
    double nrm = std::sqrt(integrate_samples(g, w2));
    for (double& x : wfull) x /= nrm;
    // v = rho^{-(n-1)/2} e^{-f/2} w; then  v^2 e^f rho^{n-1} = w^2, so the
    // weighted norm of v is already 1
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
      double rho = g[i];
      double logw = -0.5 * potential_f(rho, pp) - 0.5 * (op.n - 1) * std::log(rho);
      v[i] = wfull[i] * std::exp(logw);
    }
    rep.eigenvalues.push_back(lam);
    rep.eigenvectors.push_back(std::move(v));
    rep.eigenvectors_w.push_back(std::move(wfull));
    gap = std::min(gap, std::abs(lam));
  }
  rep.kernel_gap = gap;
  for (int j = 0; j < k; ++j) {
    if (std::abs(rep.eigenvalues[j]) <= kernel_tol) {
      double tr = kernel_trace(rep, j, kernel_tol);
      rep.traces.emplace_back(j, tr);
    }
  }
  return rep;
}

double kernel_trace(const SpectrumReport& report, int index, double kernel_tol) {
  if (index < 0 || index >= static_cast<int>(report.eigenvalues.size()))
    throw ValidationError("kernel_trace: index out of range");
  if (std::abs(report.eigenvalues[index]) > kernel_tol)
    throw ValidationError("kernel_trace: eigenvalue outside the kernel tolerance");
  const std::vector<double>& v = report.eigenvectors[index];
  DecayFit fit = decay_fit_samples(report.grid, v, report.n, 1.0);
  return fit.trace;
}

std::size_t count_eigenvalues_below(const JacobiOperator& op, double Lambda) {
  SymmetrizedOperator sym = symmetrize(op);
  return sym.matrix.count_below(Lambda);
}

KernelSweepReport kernel_sweep(double alpha_lo, double alpha_hi, int n,
                               const Target& target, const RadialGrid& grid,
                               const KernelSweepOptions& opts) {
  if (opts.samples < 50)
    throw ValidationError("kernel_sweep: sweep resolution must be >= 50 samples");
  KernelSweepReport rep;
  for (int i = 0; i < opts.samples; ++i) {
    double alpha =
        alpha_lo + (alpha_hi - alpha_lo) * double(i) / double(opts.samples - 1);
    try {
      BoundaryValueSolutionSet set =
          solve_boundary_value(alpha, n, target, opts.a_lo, opts.a_hi, grid, opts.solve);
      if (set.profiles.empty()) {
        rep.failures.emplace_back(alpha, "no profile found in search interval");
        continue;
      }
      const Profile& p = set.profiles.front();
      JacobiOperator op = build_operator(p, opts.spectral_h);
      SpectrumReport sp = spectrum(op, opts.k, opts.kernel_tol);
      rep.points.push_back(
          KernelSweepPoint{alpha, p.shoot_param, sp.eigenvalues.front(), sp.kernel_gap});
    } catch (const SolverError& e) {
      rep.failures.emplace_back(alpha, e.what());
    }
  }
  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) {
    double l0 = rep.points[i].lambda_min, l1 = rep.points[i + 1].lambda_min;
    if (l0 * l1 < 0.0)
      rep.crossings.push_back(0.5 * (rep.points[i].alpha + rep.points[i + 1].alpha));
  }
  return rep;
}

}  // namespace hmf
