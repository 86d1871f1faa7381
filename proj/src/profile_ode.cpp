#include "hmf/profile_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hmf/errors.hpp"
#include "hmf/fd.hpp"
#include "hmf/weighted_geometry.hpp"

namespace hmf {

double profile_rhs(double rho, double h, double dh, int n, const Target& target) {
  if (!(rho > 0.0)) throw ValidationError("profile_rhs: rho must be positive (use series start)");
  return -((n - 1) / rho + 0.5 * rho) * dh + (n - 1) * target.g(h) / (rho * rho);
}

double series_c3(double a, int n, const Target& target) {
  // g(h) = h + g3 h^3 + O(h^5); matching the Frobenius expansion at rho = 0
  double g3 = -target.curvature_sign() * 2.0 / 3.0;
  return ((n - 1) * g3 * a * a * a - 0.5 * a) / (2.0 * (n + 2));
}

SeriesStart series_start(double a, int n, const Target& target, double rho0) {
  if (!(rho0 > 0.0) || rho0 > 1e-3)
    throw ValidationError("series_start: need 0 < rho0 <= 1e-3");
  double c3 = series_c3(a, n, target);
  return {a * rho0 + c3 * rho0 * rho0 * rho0, a + 3.0 * c3 * rho0 * rho0};
}

double far_field_c2(double alpha, int n, const Target& target) {
  return -(n - 1) * target.g(alpha);
}

namespace {

struct State2 {
  double h, dh;
};

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3v = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Rhs {
  int n;
  Target target;
  State2 operator()(double rho, const State2& y) const {
    return {y.dh, profile_rhs(rho, y.h, y.dh, n, target)};
  }
};

struct StepResult {
  State2 y;
  double err;      // scaled error estimate
  State2 k7;       // FSAL stage
};

StepResult dp_step(const Rhs& f, double rho, const State2& y, const State2& k1, double h,
                   double atol, double rtol) {
  State2 k2 = f(rho + c2 * h, {y.h + h * a21 * k1.h, y.dh + h * a21 * k1.dh});
  State2 k3 = f(rho + c3v * h,
                {y.h + h * (a31 * k1.h + a32 * k2.h), y.dh + h * (a31 * k1.dh + a32 * k2.dh)});
  State2 k4 = f(rho + c4 * h, {y.h + h * (a41 * k1.h + a42 * k2.h + a43 * k3.h),
                               y.dh + h * (a41 * k1.dh + a42 * k2.dh + a43 * k3.dh)});
  State2 k5 = f(rho + c5 * h,
                {y.h + h * (a51 * k1.h + a52 * k2.h + a53 * k3.h + a54 * k4.h),
                 y.dh + h * (a51 * k1.dh + a52 * k2.dh + a53 * k3.dh + a54 * k4.dh)});
  State2 k6 = f(rho + h,
                {y.h + h * (a61 * k1.h + a62 * k2.h + a63 * k3.h + a64 * k4.h + a65 * k5.h),
                 y.dh + h * (a61 * k1.dh + a62 * k2.dh + a63 * k3.dh + a64 * k4.dh +
                             a65 * k5.dh)});
  State2 y5 = {y.h + h * (b1 * k1.h + b3 * k3.h + b4 * k4.h + b5 * k5.h + b6 * k6.h),
               y.dh + h * (b1 * k1.dh + b3 * k3.dh + b4 * k4.dh + b5 * k5.dh + b6 * k6.dh)};
  State2 k7 = f(rho + h, y5);
  double errh = h * (e1 * k1.h + e3 * k3.h + e4 * k4.h + e5 * k5.h + e6 * k6.h + e7 * k7.h);
  double errdh =
      h * (e1 * k1.dh + e3 * k3.dh + e4 * k4.dh + e5 * k5.dh + e6 * k6.dh + e7 * k7.dh);
  double sh = atol + rtol * std::max(std::abs(y.h), std::abs(y5.h));
  double sdh = atol + rtol * std::max(std::abs(y.dh), std::abs(y5.dh));
  double err = std::sqrt(0.5 * ((errh / sh) * (errh / sh) + (errdh / sdh) * (errdh / sdh)));
  return {y5, err, k7};
}

// integrate from (rho_from, y) to rho_to, appending samples at every node of
// `grid` passed on the way (nodes strictly inside (rho_from, rho_to])
void integrate_to_nodes(const Rhs& f, double rho_from, State2 y, const RadialGrid& grid,
                        std::size_t first_node, std::vector<double>& h_out,
                        std::vector<double>& dh_out, double rk_tol, double blowup,
                        bool hyperbolic) {
  double rho = rho_from;
  State2 k1 = f(rho, y);
  double step = std::min(1e-3, 0.1 * rho);
  std::size_t next = first_node;
  const double rho_end = grid.rho_max();
  int rejects_in_a_row = 0;
  while (rho < rho_end) {
    bool hit_node = false;
    double target_rho = rho + step;
    if (next < grid.size() && grid[next] <= target_rho + 1e-14 * target_rho) {
      target_rho = grid[next];
      hit_node = true;
    }
    double hstep = target_rho - rho;
    StepResult r = dp_step(f, rho, y, k1, hstep, rk_tol, rk_tol);
    if (!std::isfinite(r.y.h) || !std::isfinite(r.y.dh)) {
      throw SolverError("shoot: non-finite state at rho = " + std::to_string(rho));
    }
    if (r.err <= 1.0) {
      rho = target_rho;
      y = r.y;
      k1 = r.k7;
      rejects_in_a_row = 0;
      if (hyperbolic && std::abs(y.h) > blowup)
        throw SolverError("shoot: blow-up (|h| > " + std::to_string(blowup) +
                          ") at escape radius rho = " + std::to_string(rho));
      if (hit_node) {
        h_out.push_back(y.h);
        dh_out.push_back(y.dh);
        ++next;
      }
      double grow = 0.9 * std::pow(std::max(r.err, 1e-10), -0.2);
      step = hstep * std::clamp(grow, 0.2, 5.0);
      step = std::min(step, 0.5 + 0.05 * rho);
    } else {
      step = hstep * std::clamp(0.9 * std::pow(r.err, -0.2), 0.1, 0.9);
      if (++rejects_in_a_row > 60)
        throw SolverError("shoot: step control failed to meet tolerance at rho = " +
                          std::to_string(rho));
    }
    if (step < 1e-14 * std::max(1.0, rho))
      throw SolverError("shoot: step size underflow at rho = " + std::to_string(rho));
  }
}

}  // namespace

Profile shoot(double a, int n, const Target& target, const RadialGrid& grid,
              const ShootOptions& opts) {
  if (n < 3) throw ValidationError("shoot: dimension must satisfy n >= 3");
  Profile p{grid, {}, {}, n, target, a, 0.0, 0.0, opts.rk_tol, std::nullopt};
  p.h.reserve(grid.size());
  p.dh.reserve(grid.size());

  double rho0 = grid.rho0();
  SeriesStart s0 = series_start(a, n, target, rho0);
  p.h.push_back(s0.h);
  p.dh.push_back(s0.dh);

  Rhs f{n, target};
  integrate_to_nodes(f, rho0, {s0.h, s0.dh}, grid, 1, p.h, p.dh, opts.rk_tol,
                     opts.blowup_threshold, target.kind == TargetKind::Hyperbolic);
  if (p.h.size() != grid.size()) throw SolverError("shoot: internal sampling mismatch");

  Asymptotics asy = asymptotics(p);
  p.alpha_inf = asy.alpha_inf;
  p.c2 = asy.c2;
  return p;
}

bool Profile::is_constant() const {
  double m = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    m = std::max(m, std::max(std::abs(h[i] - h.back()), std::abs(dh[i])));
  return m <= 1e-12;
}

double Profile::gradient_decay_constant() const {
  PotentialParams p(n, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double rho = grid[i];
    double e2 = dh[i] * dh[i] + (n - 1) * target.q(h[i]) / (rho * rho);
    worst = std::max(worst, std::sqrt(potential_f(rho, p)) * std::sqrt(e2));
  }
  return worst;
}

Asymptotics asymptotics(const Profile& p, double win_lo, double win_hi) {
  const RadialGrid& g = p.grid;
  if (g.rho_max() < 20.0)
    throw ValidationError("asymptotics: profile must extend to rho_max >= 20");
  double lo = win_lo * g.rho_max(), hi = win_hi * g.rho_max();
  // least squares for h = alpha + c2 * x with x = rho^-2
  double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < lo || g[i] > hi) continue;
    double x = 1.0 / (g[i] * g[i]);
    double y = p.h[i];
    s11 += 1.0;
    s1x += x;
    sxx += x * x;
    s1y += y;
    sxy += x * y;
    ++count;
  }
  if (count < 4) throw ValidationError("asymptotics: fit window contains too few nodes");
  // condition number of the Gram matrix [[s11,s1x],[s1x,sxx]]
  double tr = s11 + sxx, det = s11 * sxx - s1x * s1x;
  double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  double lam_max = tr / 2.0 + disc, lam_min = tr / 2.0 - disc;
  if (!(lam_min > 0.0) || std::sqrt(lam_max / lam_min) > 1e8)
    throw SolverError("asymptotics: ill-conditioned far-field fit");
  double alpha = (sxx * s1y - s1x * sxy) / det;
  double c2v = (s11 * sxy - s1x * s1y) / det;
  return {alpha, c2v, std::nullopt};
}

double ode_defect(const Profile& p) {
  Rhs f{p.n, p.target};
  double worst = 0.0;
  const RadialGrid& g = p.grid;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    double rho = g[i];
    State2 y{p.h[i], p.dh[i]};
    // two half steps of the fifth-order pair across the cell
    double hh = 0.5 * g.spacing(i);
    for (int k = 0; k < 2; ++k) {
      State2 k1 = f(rho, y);
      StepResult r = dp_step(f, rho, y, k1, hh, p.rk_tol, p.rk_tol);
      y = r.y;
      rho += hh;
    }
    double d = std::max(std::abs(y.h - p.h[i + 1]), std::abs(y.dh - p.dh[i + 1]));
    worst = std::max(worst, d / g.spacing(i));
  }
  return worst;
}

double fd_residual(const Profile& p) {
  const RadialGrid& g = p.grid;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    double d2 = d1_nonuniform(g, p.dh, i);
    double rhs = profile_rhs(g[i], p.h[i], p.dh[i], p.n, p.target);
    worst = std::max(worst, std::abs(d2 - rhs));
  }
  return worst;
}

namespace {

double sup_distance(const Profile& a, const Profile& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.h.size(); ++i) d = std::max(d, std::abs(a.h[i] - b.h[i]));
  return d;
}

}  // namespace

BoundaryValueSolutionSet solve_boundary_value(double alpha, int n, const Target& target,
                                              double a_lo, double a_hi,
                                              const RadialGrid& grid,
                                              const SolveOptions& opts) {
  if (!(a_hi > a_lo) || !std::isfinite(a_lo) || !std::isfinite(a_hi))
    throw ValidationError("solve_boundary_value: search interval must be finite and nonempty");
  if (alpha < 0.0) throw ValidationError("solve_boundary_value: alpha must be nonnegative");
  BoundaryValueSolutionSet out;
  out.alpha_target = alpha;

  const int ns = std::max(opts.sweep_samples, 200);
  std::vector<std::pair<double, double>> samples;  // (a, eta = alpha_inf - alpha)
  for (int i = 0; i < ns; ++i) {
    double a = a_lo + (a_hi - a_lo) * double(i) / double(ns - 1);
    try {
      Profile p = shoot(a, n, target, grid, opts.shoot);
      samples.emplace_back(a, p.alpha_inf - alpha);
      out.sweep.emplace_back(a, p.alpha_inf);
    } catch (const SolverError& e) {
      out.failures.emplace_back(a, e.what());
    }
  }

  auto eta_of = [&](double a) {
    Profile p = shoot(a, n, target, grid, opts.shoot);
    return p.alpha_inf - alpha;
  };

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    auto [al, el] = samples[i];
    auto [ar, er] = samples[i + 1];
    if (el == 0.0) {
      roots.push_back(al);
      continue;
    }
    if (el * er < 0.0) {
      out.bracket_log.emplace_back(al, ar);
      double lo = al, hi = ar, flo = el;
      for (int it = 0; it < 200 && (hi - lo) > opts.bv_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm;
        try {
          fm = eta_of(mid);
        } catch (const SolverError&) {
          // treat a failed midpoint as the side that blew up; shrink toward lo
          hi = mid;
          continue;
        }
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0)
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
  }
  if (!samples.empty() && samples.back().second == 0.0) roots.push_back(samples.back().first);

  for (double a : roots) {
    Profile p = shoot(a, n, target, grid, opts.shoot);
    bool dup = false;
    for (const Profile& q : out.profiles)
      if (sup_distance(p, q) <= 10.0 * opts.bv_tol) dup = true;
    if (!dup) out.profiles.push_back(std::move(p));
  }
  return out;
}

}  // namespace hmf
