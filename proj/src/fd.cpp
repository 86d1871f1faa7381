#include "hmf/fd.hpp"

#include <algorithm>
#include <cmath>

#include "hmf/errors.hpp"

namespace hmf {

double d1_nonuniform(const RadialGrid& g, const std::vector<double>& u, std::size_t i) {
  double hl = g[i] - g[i - 1], hr = g[i + 1] - g[i];
  return (hl * hl * u[i + 1] - hr * hr * u[i - 1] + (hr * hr - hl * hl) * u[i]) /
         (hl * hr * (hl + hr));
}

double d2_nonuniform(const RadialGrid& g, const std::vector<double>& u, std::size_t i) {
  double hl = g[i] - g[i - 1], hr = g[i + 1] - g[i];
  return 2.0 * (hl * u[i + 1] + hr * u[i - 1] - (hl + hr) * u[i]) / (hl * hr * (hl + hr));
}

std::vector<double> d1_all(const RadialGrid& g, const std::vector<double>& u) {
  const std::size_t m = g.size();
  std::vector<double> du(m);
  for (std::size_t i = 1; i + 1 < m; ++i) du[i] = d1_nonuniform(g, u, i);
  // one-sided second-order ends
  {
    double h0 = g[1] - g[0], h1 = g[2] - g[1];
    du[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * u[0] + (h0 + h1) / (h0 * h1) * u[1] -
            h0 / (h1 * (h0 + h1)) * u[2];
    std::size_t k = m - 1;
    double hl = g[k] - g[k - 1], hll = g[k - 1] - g[k - 2];
    du[k] = (2.0 * hl + hll) / (hl * (hl + hll)) * u[k] - (hl + hll) / (hl * hll) * u[k - 1] +
            hl / (hll * (hl + hll)) * u[k - 2];
  }
  return du;
}

DriftRow drift_laplacian_row(const RadialGrid& g, int n, std::size_t i) {
  double rho = g[i];
  double hl = g[i] - g[i - 1], hr = g[i + 1] - g[i];
  double hbar = 0.5 * (hl + hr);
  auto a = [n](double r) { return std::pow(r, n - 1); };
  double ai = a(rho);
  double ap = a(rho + 0.5 * hr), am = a(rho - 0.5 * hl);
  DriftRow row;
  // conservative rho^(n-1)-weighted Laplacian
  row.cr = ap / (hr * hbar * ai);
  row.cl = am / (hl * hbar * ai);
  row.cc = -(row.cr + row.cl);
  // drift (rho/2) d/drho, parabola stencil
  double denom = hl * hr * (hl + hr);
  row.cr += 0.5 * rho * (hl * hl) / denom;
  row.cl -= 0.5 * rho * (hr * hr) / denom;
  row.cc += 0.5 * rho * (hr * hr - hl * hl) / denom;
  return row;
}

double apply_drift_laplacian(const RadialGrid& g, int n, const std::vector<double>& u,
                             std::size_t i) {
  DriftRow r = drift_laplacian_row(g, n, i);
  return r.cl * u[i - 1] + r.cc * u[i] + r.cr * u[i + 1];
}

namespace {
std::size_t cell_of(const RadialGrid& g, double rho) { return g.locate(rho); }
}  // namespace

double hermite_value(const RadialGrid& g, const std::vector<double>& u,
                     const std::vector<double>& du, double rho) {
  rho = std::clamp(rho, g.rho0(), g.rho_max());
  std::size_t i = cell_of(g, rho);
  double h = g[i + 1] - g[i];
  double t = (rho - g[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
}

double hermite_derivative(const RadialGrid& g, const std::vector<double>& u,
                          const std::vector<double>& du, double rho) {
  rho = std::clamp(rho, g.rho0(), g.rho_max());
  std::size_t i = cell_of(g, rho);
  double h = g[i + 1] - g[i];
  double t = (rho - g[i]) / h;
  double t2 = t * t;
  double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
  double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  return d00 * u[i] + d10 * du[i] + d01 * u[i + 1] + d11 * du[i + 1];
}

}  // namespace hmf
