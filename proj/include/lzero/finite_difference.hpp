#pragma once

#include <functional>

#include "lzero/tolerances.hpp"

namespace lzero {

struct DerivativeEstimate {
  double value = 0.0;
  double error = 0.0;   ///< |difference| between the last two extrapolants
  bool noisy = false;   ///< extrapolation tail failed to contract
};

/// d^k f / dt^k at 0 for an even function f and k in {2, 4, 6}.
///
/// Uses the symmetric central stencil (folded by evenness, so only t >= 0 is
/// sampled) at steps h, h/2, ..., with h = tol.deriv_step * scale, followed by
/// Richardson extrapolation in h^2 over tol.richardson_levels levels.
DerivativeEstimate derivative_at_zero(const std::function<double(double)>& f, int order,
                                      const Tolerances& tol, double scale = 1.0);

}  // namespace lzero
