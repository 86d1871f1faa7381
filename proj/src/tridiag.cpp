#include "hmf/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmf/errors.hpp"

namespace hmf {

std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& sup,
                                      const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || sup.size() != n || rhs.size() != n)
    throw ValidationError("solve_tridiagonal: mismatched sizes");
  std::vector<double> c(n), d(n), x(n);
  double piv = diag[0];
  if (piv == 0.0 || !std::isfinite(piv)) throw SolverError("tridiagonal solve: singular pivot at row 0");
  c[0] = sup[0] / piv;
  d[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - sub[i] * c[i - 1];
    if (piv == 0.0 || !std::isfinite(piv))
      throw SolverError("tridiagonal solve: singular pivot at row " + std::to_string(i));
    c[i] = sup[i] / piv;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

SymTridiag::SymTridiag(std::vector<double> d, std::vector<double> e)
    : d_(std::move(d)), e_(std::move(e)) {
  if (e_.size() + 1 != d_.size()) throw ValidationError("SymTridiag: off-diagonal size must be n-1");
}

std::size_t SymTridiag::count_below(double x) const {
  // LDL^T pivots of T - x I; count of negative pivots = eigenvalues below x
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::size_t count = 0;
  double q = d_[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d_.size(); ++i) {
    double denom = q;
    if (std::abs(denom) < tiny) denom = std::copysign(tiny, denom == 0.0 ? -1.0 : denom);
    q = d_[i] - x - e_[i - 1] * e_[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

double SymTridiag::eigenvalue(std::size_t k, double tol) const {
  if (k >= size()) throw ValidationError("SymTridiag::eigenvalue: index out of range");
  // Gershgorin bounds
  double lo = d_[0], hi = d_[0];
  for (std::size_t i = 0; i < d_.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e_[i - 1]);
    if (i + 1 < d_.size()) r += std::abs(e_[i]);
    lo = std::min(lo, d_[i] - r);
    hi = std::max(hi, d_[i] + r);
  }
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> SymTridiag::eigenvector(double lambda) const {
  const std::size_t n = size();
  // slight shift off the eigenvalue keeps the factorization regular
  double scale = 0.0;
  for (double v : d_) scale = std::max(scale, std::abs(v));
  for (double v : e_) scale = std::max(scale, std::abs(v));
  double shift = lambda + 1e-11 * std::max(1.0, scale) * 1e-2;

  std::vector<double> sub(n, 0.0), diag(n), sup(n, 0.0), b(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = d_[i] - shift;
  for (std::size_t i = 1; i < n; ++i) sub[i] = e_[i - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) sup[i] = e_[i];

  std::vector<double> v(n, 1.0 / std::sqrt(double(n)));
  for (int it = 0; it < 4; ++it) {
    std::vector<double> w;
    try {
      w = solve_tridiagonal(sub, diag, sup, v);
    } catch (const SolverError&) {
      // dead-on shift: nudge and retry once
      for (std::size_t i = 0; i < n; ++i) diag[i] += 1e-9 * std::max(1.0, scale);
      w = solve_tridiagonal(sub, diag, sup, v);
    }
    double nrm = 0.0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw SolverError("inverse iteration failed to converge");
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nrm;
  }
  // deterministic sign: largest-magnitude entry positive
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
  return v;
}

}  // namespace hmf
