#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "lzero/tolerances.hpp"

namespace lzero {

/// Behaviour of the integrand at the endpoints of (a, b).
struct EndpointHint {
  enum class Kind { regular, power_singularity };
  Kind kind = Kind::regular;
  double alpha = 0.0;  ///< exponent of the singularity, f ~ |t - endpoint|^alpha

  static EndpointHint regular() { return {}; }
  static EndpointHint power_singularity(double alpha) { return {Kind::power_singularity, alpha}; }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Adaptive quadrature of f over (a, b); b may be +infinity.
///
/// Regular integrands on finite intervals use adaptive Gauss-Kronrod (7/15).
/// Singular endpoints (power or logarithmic) use tanh-sinh, and half-infinite
/// intervals use exp-sinh. Throws ConvergenceError, carrying the partial
/// estimate, when the error estimate stays above tolerance.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const Tolerances& tol, EndpointHint hint = EndpointHint::regular());

struct GaussRule {
  std::vector<double> x;  ///< nodes on [-1, 1], ascending
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1, 1], computed once per n.
const GaussRule& gauss_legendre_rule(int n);

/// Fixed n-point Gauss-Legendre rule on [a, b]. Nodes never touch the endpoints.
double gauss_legendre_fixed(const std::function<double(double)>& f, double a, double b, int points);

}  // namespace lzero
