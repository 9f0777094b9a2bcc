#include "lzero/special.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "lzero/errors.hpp"

namespace lzero {

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw InputError("digamma: argument must be positive and finite (got " + std::to_string(x) + ")");
  return boost::math::digamma(x);
}

}  // namespace lzero
