#pragma once

#include <cstddef>
#include <vector>

namespace hmf {

// General tridiagonal system: sub[i]*x[i-1] + diag[i]*x[i] + sup[i]*x[i+1] = rhs[i]
// (sub[0] and sup[n-1] ignored). Throws SolverError on a (near-)singular pivot.
std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& sup,
                                      const std::vector<double>& rhs);

// Symmetric tridiagonal eigen-solver: diagonal d[0..m-1], off-diagonal
// e[0..m-2]. Eigenvalues by Sturm-count bisection, eigenvectors by inverse
// iteration. Deterministic; meant for the lowest few eigenpairs of
// well-separated spectra (discretized Schroedinger operators).
class SymTridiag {
 public:
  SymTridiag(std::vector<double> d, std::vector<double> e);

  std::size_t size() const { return d_.size(); }
  const std::vector<double>& diag() const { return d_; }
  const std::vector<double>& off() const { return e_; }

  // number of eigenvalues strictly below x (Sturm count)
  std::size_t count_below(double x) const;

  // k-th smallest eigenvalue (0-based), to absolute tolerance tol
  double eigenvalue(std::size_t k, double tol = 1e-12) const;

  // eigenvector for an eigenvalue estimate (inverse iteration), normalized
  // to Euclidean norm 1 with a deterministic sign (largest entry positive)
  std::vector<double> eigenvector(double lambda) const;

 private:
  std::vector<double> d_, e_;
};

}  // namespace hmf
