#pragma once

#include <functional>

#include "lzero/tolerances.hpp"

namespace lzero {

/// Root of a continuous f on [lo, hi] with f(lo)·f(hi) <= 0. Returns a point
/// whose bracket has width at most max(root_tol, 4 eps |x|).
/// Throws InputError when the endpoints do not bracket a sign change.
double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    const Tolerances& tol);

/// Same, for callers that already hold f(lo) and f(hi).
double bracket_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                    double f_hi, double root_tol);

}  // namespace lzero
