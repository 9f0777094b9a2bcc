#include "lzero/roots.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "lzero/errors.hpp"

namespace lzero {

double bracket_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                    double f_hi, double root_tol) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!(f_lo * f_hi < 0.0))
    throw InputError("bracket_root: no sign change on [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  auto done = [root_tol](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(b - a) <= std::max(root_tol, 4.0 * std::numeric_limits<double>::epsilon() * scale);
  };
  std::uintmax_t iterations = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, iterations);
  return 0.5 * (a + b);
}

double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    const Tolerances& tol) {
  return bracket_root(f, lo, hi, f(lo), f(hi), tol.root_tol);
}

}  // namespace lzero
