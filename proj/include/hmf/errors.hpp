#pragma once

#include <stdexcept>
#include <string>

namespace hmf {

// Bad user input: config keys, parameter ranges. CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver failed to produce a result: ODE blow-up, tolerance failure,
// singular linear system, eigenpair non-convergence. CLI exit code 3.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// An invariant or precondition of an operation was violated by otherwise
// well-formed data (grid mismatch, boundary-angle mismatch, empty fit
// window). CLI exit code 4.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hmf
