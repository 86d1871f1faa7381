#pragma once

#include <cmath>
#include <string>

#include "hmf/errors.hpp"

namespace hmf {

enum class TargetKind { Sphere, Hyperbolic };

// Round target geometry entering the corotational reduction. The angle h
// parametrizes a meridian; g drives the reduced equation, q the angular
// energy density. For the sphere g(h) = sin(h)cos(h), for hyperbolic space
// g(h) = sinh(h)cosh(h).
struct Target {
  TargetKind kind = TargetKind::Sphere;

  int curvature_sign() const { return kind == TargetKind::Sphere ? +1 : -1; }

  double g(double h) const {
    return kind == TargetKind::Sphere ? 0.5 * std::sin(2.0 * h)
                                      : 0.5 * std::sinh(2.0 * h);
  }
  // dg/dh
  double gp(double h) const {
    return kind == TargetKind::Sphere ? std::cos(2.0 * h) : std::cosh(2.0 * h);
  }
  // angular energy factor: sin^2 h | sinh^2 h
  double q(double h) const {
    double s = kind == TargetKind::Sphere ? std::sin(h) : std::sinh(h);
    return s * s;
  }
  // exact difference q(b) - q(a), stable for nearly equal angles
  double q_diff(double b, double a) const {
    if (kind == TargetKind::Sphere) return std::sin(b + a) * std::sin(b - a);
    return std::sinh(b + a) * std::sinh(b - a);
  }
  // chord factor sin|sinh of an angle difference
  double sn(double d) const {
    return kind == TargetKind::Sphere ? std::sin(d) : std::sinh(d);
  }
  // 1 - cos(d) | 1 - cosh(d), evaluated cancellation-free
  double one_minus_cs(double d) const {
    double s = kind == TargetKind::Sphere ? std::sin(0.5 * d) : std::sinh(0.5 * d);
    double two_s2 = 2.0 * s * s;
    return kind == TargetKind::Sphere ? two_s2 : -two_s2;
  }

  std::string name() const {
    return kind == TargetKind::Sphere ? "sphere" : "hyperbolic";
  }

  static Target parse(const std::string& s) {
    if (s == "sphere") return Target{TargetKind::Sphere};
    if (s == "hyperbolic") return Target{TargetKind::Hyperbolic};
    throw ConfigError("unknown target kind '" + s + "' (expected sphere|hyperbolic)");
  }
};

}  // namespace hmf
