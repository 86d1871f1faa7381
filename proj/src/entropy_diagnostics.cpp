#include "hmf/entropy_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmf/errors.hpp"
#include "hmf/fd.hpp"
#include "hmf/weighted_geometry.hpp"

namespace hmf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// e^{+f}-weighted difference integrals are not evaluated past this value of
// f: beyond it double precision cannot certify the fast-decay class that
// makes the improper integral converge, and rounding noise would be
// amplified by up to e^{f(rho_max)}. The neglected tail enters the reported
// truncation bound.
constexpr double kTrustF = 45.0;

struct SliceView {
  const RadialGrid* grid;
  const std::vector<double>* h;
  std::vector<double> dh;
  std::vector<double> o;  // obstruction samples (empty: treated as zero)
  double o_bound = 0.0;   // sup bound on the neglected obstruction
  int n;
  Target target;
  double alpha;
};

double weight_log(double rho, int n) {
  return rho * rho / 4.0 + 0.5 * n + (n - 1) * std::log(rho);
}

// index one past the last node kept in a difference integral: noise floor
// `floor_mult` ulps of the operands, plus the trust cap on f
std::size_t diff_cut(const RadialGrid& g, const std::vector<double>& a,
                     const std::vector<double>& b, int n, double floor_mult) {
  std::size_t cut = 0;
  PotentialParams p(n, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (potential_f(g[i], p) > kTrustF) break;
    double floor = floor_mult * kEps * std::max(std::abs(a[i]), std::abs(b[i]));
    if (std::abs(a[i] - b[i]) > floor && a[i] != b[i]) cut = i + 1;
  }
  return cut;
}

EntropyReport relative_entropy_impl(const SliceView& a, const SliceView& b, double t) {
  PotentialParams pp(a.n, t);
  (void)pp;  // validates t > 0
  if (!a.grid->same_nodes(*b.grid))
    throw ValidationError("relative_entropy: grid mismatch");
  if (a.n != b.n || a.target.kind != b.target.kind)
    throw ValidationError("relative_entropy: dimension or target mismatch");
  if (std::abs(a.alpha - b.alpha) > 1e-6)
    throw ValidationError("relative_entropy: boundary angles differ (" +
                          std::to_string(a.alpha) + " vs " + std::to_string(b.alpha) +
                          "); entropy undefined");

  const RadialGrid& g = *a.grid;
  const std::size_t m = g.size();
  const int n = a.n;
  const Target& tg = a.target;
  const double cn = entropy_prefactor(n);

  std::size_t cut = diff_cut(g, *a.h, *b.h, n, 1000.0);
  EntropyReport rep;
  rep.rho_cut = cut == 0 ? g.rho0() : g[cut - 1];
  if (cut == 0) return rep;  // states identical within resolution

  // direct route, difference-first
  ScaledIntegrand direct{std::vector<double>(m, 0.0), 0.0};
  ScaledIntegrand bulk{std::vector<double>(m, 0.0), 0.0};
  ScaledIntegrand obstruction_mag{std::vector<double>(m, 0.0), 0.0};
  ScaledIntegrand a_mag{std::vector<double>(m, 0.0), 0.0};
  for (std::size_t i = 0; i < cut; ++i) {
    double rho = g[i];
    double delta = (*a.h)[i] - (*b.h)[i];
    double ddelta = a.dh[i] - b.dh[i];
    double wdiff = ddelta * (a.dh[i] + b.dh[i]) +
                   (n - 1) * tg.q_diff((*a.h)[i], (*b.h)[i]) / (rho * rho);
    direct.values[i] = wdiff;
    double a_term = -tg.one_minus_cs(delta) * wdiff;
    double o_i = a.o.empty() ? 0.0 : a.o[i];
    double o_term = -o_i * tg.sn(delta);
    bulk.values[i] = a_term + o_term;
    a_mag.values[i] = std::abs(a_term);
    obstruction_mag.values[i] =
        std::abs(o_term) + a.o_bound * std::abs(tg.sn(delta));
  }

  PotentialParams p1(n, 1.0);
  rep.value = cn * weighted_integral(g, direct, +1, p1).value;
  double bulk_val = cn * weighted_integral(g, bulk, +1, p1).value;

  // sphere boundary term of the integration by parts at the cut radius
  std::size_t ic = cut - 1;
  double delta_c = (*a.h)[ic] - (*b.h)[ic];
  double bterm = cn * (a.dh[ic] + b.dh[ic]) * tg.sn(delta_c) *
                 std::exp(weight_log(g[ic], n));
  rep.value_ibp = bulk_val + bterm;

  rep.audit_a_term = cn * weighted_integral(g, a_mag, +1, p1).value;
  rep.audit_obstruction_term = cn * weighted_integral(g, obstruction_mag, +1, p1).value;
  rep.audit_boundary_term = std::abs(bterm);

  // tail estimate: the difference integrand of a fast-decay pair falls off
  // like 1/rho^3 past the cut, so tail ~ |integrand(cut)| * rho_cut / 2
  double tail = std::abs(direct.values[ic]) * std::exp(weight_log(g[ic], n)) *
                rep.rho_cut / 2.0;
  // bound on the omitted/approximated obstruction term
  double obound = a.o.empty() ? rep.audit_obstruction_term : 0.0;
  rep.truncation_bound = cn * tail + obound;
  return rep;
}

std::vector<double> discrete_obstruction(const RadialGrid& g, const std::vector<double>& h,
                                         int n, const Target& tg) {
  std::vector<double> o(g.size(), 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    o[i] = apply_drift_laplacian(g, n, h, i) - (n - 1) * tg.g(h[i]) / (g[i] * g[i]);
  return o;
}

}  // namespace

double entropy_prefactor(int n) {
  return sphere_area(n) / std::pow(4.0 * M_PI, 0.5 * n);
}

double energy_density(double rho, double h, double dh, int n, const Target& target) {
  return 0.5 * (dh * dh + (n - 1) * target.q(h) / (rho * rho));
}

double energy_density(const Profile& p, double rho) {
  double h = hermite_value(p.grid, p.h, p.dh, rho);
  double dh = hermite_derivative(p.grid, p.h, p.dh, rho);
  return energy_density(rho, h, dh, p.n, p.target);
}

EntropyReport relative_entropy(const Profile& a, const Profile& b, double t) {
  SliceView va{&a.grid, &a.h, a.dh, {}, 100.0 * a.rk_tol, a.n, a.target, a.alpha_inf};
  SliceView vb{&b.grid, &b.h, b.dh, {}, 0.0, b.n, b.target, b.alpha_inf};
  return relative_entropy_impl(va, vb, t);
}

EntropyReport relative_entropy(const FlowState& a, const Profile& b, double t) {
  SliceView va{&a.grid, &a.h,      d1_all(a.grid, a.h),
               discrete_obstruction(a.grid, a.h, a.n, a.target),
               0.0,     a.n,       a.target,
               a.alpha};
  SliceView vb{&b.grid, &b.h, b.dh, {}, 0.0, b.n, b.target, b.alpha_inf};
  return relative_entropy_impl(va, vb, t);
}

double dissipation(const FlowState& state, const FlowState& prev, double t) {
  PotentialParams pp(state.n, t);
  (void)pp;
  if (!state.grid.same_nodes(prev.grid))
    throw ValidationError("dissipation: mismatched grids");
  double ds = state.s - prev.s;
  if (!(ds > 0.0)) throw ValidationError("dissipation: slices must be ds apart");
  const RadialGrid& g = state.grid;
  std::size_t cut = diff_cut(g, state.h, prev.h, state.n, 4.0);
  ScaledIntegrand ig{std::vector<double>(g.size(), 0.0), 0.0};
  for (std::size_t i = 0; i < cut; ++i) {
    double o = (state.h[i] - prev.h[i]) / ds;
    ig.values[i] = o * o;
  }
  PotentialParams p1(state.n, 1.0);
  return 2.0 * entropy_prefactor(state.n) * weighted_integral(g, ig, +1, p1).value;
}

double entropy_increment(const FlowState& state, const FlowState& prev) {
  if (!state.grid.same_nodes(prev.grid))
    throw ValidationError("entropy_increment: mismatched grids");
  const RadialGrid& g = state.grid;
  const int n = state.n;
  std::size_t cut = diff_cut(g, state.h, prev.h, n, 4.0);
  if (cut == 0) return 0.0;
  std::vector<double> diff(g.size()), sum(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    diff[i] = state.h[i] - prev.h[i];
    sum[i] = state.h[i] + prev.h[i];
  }
  std::vector<double> ddiff = d1_all(g, diff), dsum = d1_all(g, sum);
  ScaledIntegrand ig{std::vector<double>(g.size(), 0.0), 0.0};
  for (std::size_t i = 0; i < cut; ++i) {
    double rho = g[i];
    ig.values[i] = ddiff[i] * dsum[i] +
                   (n - 1) * state.target.q_diff(state.h[i], prev.h[i]) / (rho * rho);
  }
  PotentialParams p1(n, 1.0);
  return entropy_prefactor(n) * weighted_integral(g, ig, +1, p1).value;
}

namespace {

// prefix quadrature over nodes [0..iR] of pre-weighted samples
double prefix_integral(const std::vector<double>& nodes, const std::vector<double>& vals,
                       std::size_t iR) {
  std::vector<double> sub_nodes(nodes.begin(), nodes.begin() + iR + 1);
  std::vector<double> sub_vals(vals.begin(), vals.begin() + iR + 1);
  std::vector<double> w = simpson_weights_nodes(sub_nodes);
  CompensatedSum acc;
  for (std::size_t i = 0; i <= iR; ++i) acc.add(sub_vals[i] * w[i]);
  return acc.value();
}

}  // namespace

FrequencyReport frequency(const Profile& p, const std::vector<double>& radii) {
  const RadialGrid& g = p.grid;
  const int n = p.n;
  FrequencyReport rep;
  if (radii.size() < 3) throw ValidationError("frequency: need at least three radii");
  for (double R : radii)
    if (R < g.rho0() || R > g.rho_max())
      throw ValidationError("frequency: radius outside the grid");

  const std::size_t m = g.size();
  std::vector<double> w_e(m), w_k(m), w_1(m);
  for (std::size_t i = 0; i < m; ++i) {
    double rho = g[i];
    double wfull = p.dh[i] * p.dh[i] + (n - 1) * p.target.q(p.h[i]) / (rho * rho);
    double wt = std::exp(weight_log(rho, n));
    w_e[i] = wfull * wt;
    w_k[i] = 0.5 * rho * rho * wfull * wt;
    w_1[i] = wt;
  }

  std::vector<double> Iw(radii.size()), K(radii.size()), J(radii.size());
  rep.radii.resize(radii.size());
  rep.frequency.resize(radii.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    std::size_t iR = g.locate(radii[j]);
    if (g[iR + 1] - radii[j] < radii[j] - g[iR]) ++iR;  // snap to nearest node
    double R = g[iR];
    rep.radii[j] = R;
    Iw[j] = prefix_integral(g.nodes(), w_e, iR);
    K[j] = prefix_integral(g.nodes(), w_k, iR);
    double I1 = prefix_integral(g.nodes(), w_1, iR);
    rep.frequency[j] = R * R * Iw[j] / I1;
    J[j] = std::pow(R, 2 - n) * Iw[j];

    // differentiated Pohozaev identity with the analytic d/dR of the
    // cumulative integral (fundamental theorem of calculus)
    double wR = p.dh[iR] * p.dh[iR] + (n - 1) * p.target.q(p.h[iR]) / (R * R);
    double efR = std::exp(weight_log(R, n)) / std::pow(R, n - 1);
    double T1 = (2 - n) * std::pow(R, 1 - n) * Iw[j];
    double T2 = R * wR * efR;
    double T3 = std::pow(R, 1 - n) * K[j];
    double T4 = 2.0 * R * efR * p.dh[iR] * p.dh[iR];
    double denom = std::abs(T1) + std::abs(T2) + std::abs(T3) + std::abs(T4);
    double defect = denom > 0.0 ? std::abs(T1 + T2 - T3 - T4) / denom : 0.0;
    worst = std::max(worst, defect);
  }
  rep.pohozaev_residual = worst;

  // same identity with centered differences of J over the radii list
  double worst_fd = 0.0;
  for (std::size_t j = 1; j + 1 < radii.size(); ++j) {
    double dJ = (J[j + 1] - J[j - 1]) / (rep.radii[j + 1] - rep.radii[j - 1]);
    double R = rep.radii[j];
    std::size_t iR = g.locate(R);
    if (std::abs(g[iR + 1] - R) < std::abs(R - g[iR])) ++iR;
    double efR = std::exp(weight_log(R, n)) / std::pow(R, n - 1);
    double T3 = std::pow(R, 1 - n) * K[j];
    double T4 = 2.0 * R * efR * p.dh[iR] * p.dh[iR];
    double denom = std::abs(dJ) + std::abs(T3) + std::abs(T4);
    worst_fd = std::max(worst_fd, denom > 0.0 ? std::abs(dJ - T3 - T4) / denom : 0.0);
  }
  rep.pohozaev_fd_residual = worst_fd;

  rep.strictly_increasing = true;
  for (std::size_t j = 0; j + 1 < radii.size(); ++j)
    if (!(rep.frequency[j + 1] > rep.frequency[j])) rep.strictly_increasing = false;
  return rep;
}

double angular_energy_integral(const Profile& p, double radius) {
  const RadialGrid& g = p.grid;
  if (radius < g.rho0() || radius > g.rho_max())
    throw ValidationError("angular_energy_integral: radius outside the grid");
  std::size_t iR = g.locate(radius);
  const int n = p.n;
  // |grad^sph u|^2_sph = (n-1) q(h) in the sphere-metric norm, so the
  // integrand is (n-1) q(h) e^f rho^{n-1}
  std::vector<double> vals(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    vals[i] = (n - 1) * p.target.q(p.h[i]) * std::exp(weight_log(g[i], n));
  return sphere_area(n) * prefix_integral(g.nodes(), vals, iR);
}

DecayFit decay_fit_samples(const RadialGrid& grid, const std::vector<double>& diff, int n,
                           double beta) {
  if (diff.size() != grid.size())
    throw ValidationError("decay_fit: sample count does not match grid");
  double rho_max = grid.rho_max();
  auto collect = [&](double lo, double hi) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= lo && grid[i] <= hi && diff[i] != 0.0 && std::isfinite(diff[i]))
        idx.push_back(i);
    return idx;
  };
  std::vector<std::size_t> idx = collect(std::max(8.0, 0.4 * rho_max), 0.8 * rho_max);
  if (idx.size() < 8) idx = collect(4.0, 0.8 * rho_max);
  if (idx.size() < 8)
    throw ValidationError(
        "decay_fit: window empty (difference below noise floor; states "
        "identical within resolution)");

  PotentialParams p(n, 1.0);
  CompensatedSum mean_acc;
  std::vector<double> ys(idx.size());
  double sign_acc = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    std::size_t i = idx[k];
    double f = potential_f(grid[i], p);
    ys[k] = std::log(std::abs(diff[i])) + beta * f + 0.5 * n * std::log(f);
    mean_acc.add(ys[k]);
    sign_acc += diff[i] > 0 ? 1.0 : -1.0;
  }
  double mean = mean_acc.value() / double(idx.size());
  CompensatedSum rms_acc;
  for (double y : ys) rms_acc.add((y - mean) * (y - mean));
  double rms = std::sqrt(rms_acc.value() / double(idx.size()));

  DecayFit fit;
  fit.window_lo = grid[idx.front()];
  fit.window_hi = grid[idx.back()];
  fit.trace = (sign_acc >= 0.0 ? 1.0 : -1.0) * std::exp(mean);
  fit.fit_residual = rms;
  fit.model_adequate = rms <= 0.05;
  return fit;
}

namespace {

std::vector<double> profile_difference(const Profile& p1, const Profile& p2) {
  if (!p1.grid.same_nodes(p2.grid)) throw ValidationError("decay_fit: grid mismatch");
  if (p1.n != p2.n || p1.target.kind != p2.target.kind)
    throw ValidationError("decay_fit: dimension or target mismatch");
  if (std::abs(p1.alpha_inf - p2.alpha_inf) > 1e-6)
    throw ValidationError("decay_fit: boundary angles differ");
  std::vector<double> d(p1.h.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double floor = 1000.0 * kEps * std::max(std::abs(p1.h[i]), std::abs(p2.h[i]));
    double v = p2.h[i] - p1.h[i];  // signed by (h2 - h1)
    d[i] = std::abs(v) > floor ? v : 0.0;
  }
  return d;
}

}  // namespace

DecayFit decay_fit(const Profile& p1, const Profile& p2) {
  return decay_fit_samples(p1.grid, profile_difference(p1, p2), p1.n, 1.0);
}

double rescaled_difference_check(const Profile& p1, const Profile& p2) {
  std::vector<double> d = profile_difference(p1, p2);
  DecayFit fit = decay_fit_samples(p1.grid, d, p1.n, 1.0);  // validates window
  const RadialGrid& g = p1.grid;
  PotentialParams p(p1.n, 1.0);
  std::vector<std::size_t> idx;
  std::vector<double> U;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < fit.window_lo || g[i] > fit.window_hi || d[i] == 0.0) continue;
    double f = potential_f(g[i], p);
    double logu = std::log(std::abs(d[i])) + f + 0.5 * p1.n * std::log(f);
    idx.push_back(i);
    U.push_back((d[i] > 0 ? 1.0 : -1.0) * std::exp(logu));
  }
  double supU = 0.0;
  for (double u : U) supU = std::max(supU, std::abs(u));
  if (!(supU > 0.0)) throw ValidationError("rescaled_difference_check: empty window");
  double bound = 0.0;
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    if (idx[k + 1] != idx[k] + 1 || idx[k] != idx[k - 1] + 1) continue;  // need contiguous
    double du = (U[k + 1] - U[k - 1]) / (g[idx[k + 1]] - g[idx[k - 1]]);
    double f = potential_f(g[idx[k]], p);
    bound = std::max(bound, std::sqrt(f) * std::abs(du));
  }
  return bound / supU;
}

}  // namespace hmf
