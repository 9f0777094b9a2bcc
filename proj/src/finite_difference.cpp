#include "lzero/finite_difference.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lzero/errors.hpp"

namespace lzero {
namespace {

// Folded central stencils for even f: d^k f(0) ≈ Σ c_j f(j h) / h^k.
double stencil(const std::function<double(double)>& f, int order, double h, double f0) {
  switch (order) {
    case 2:
      return 2.0 * (f(h) - f0) / (h * h);
    case 4:
      return (2.0 * f(2 * h) - 8.0 * f(h) + 6.0 * f0) / std::pow(h, 4);
    case 6:
      return (2.0 * f(3 * h) - 12.0 * f(2 * h) + 30.0 * f(h) - 20.0 * f0) / std::pow(h, 6);
    default:
      throw InputError("derivative_at_zero: order must be 2, 4 or 6 (got " + std::to_string(order) + ")");
  }
}

}  // namespace

DerivativeEstimate derivative_at_zero(const std::function<double(double)>& f, int order,
                                      const Tolerances& tol, double scale) {
  if (order != 2 && order != 4 && order != 6)
    throw InputError("derivative_at_zero: order must be 2, 4 or 6 (got " + std::to_string(order) + ")");
  const int levels = std::max(1, tol.richardson_levels);
  // wider base step for higher orders: rounding grows like eps / h^order
  const double h0 = tol.deriv_step * scale * std::pow(4.0, order / 2 - 1);
  if (!(h0 > 0) || h0 / std::pow(2.0, levels - 1) < 1e3 * std::numeric_limits<double>::min())
    throw InputError("derivative_at_zero: step underflow");

  const double f0 = f(0.0);
  // table[i][j]: step h0/2^i, j extrapolations
  std::vector<std::vector<double>> table(levels);
  for (int i = 0; i < levels; ++i) {
    const double h = h0 / std::pow(2.0, i);
    table[i].resize(i + 1);
    table[i][0] = stencil(f, order, h, f0);
    for (int j = 1; j <= i; ++j) {
      const double factor = std::pow(4.0, j);
      table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
    }
  }

  DerivativeEstimate out;
  out.value = table[levels - 1][levels - 1];
  if (levels >= 2) {
    const double last = std::abs(table[levels - 1][levels - 1] - table[levels - 2][levels - 2]);
    out.error = last;
    if (levels >= 3) {
      const double prev = std::abs(table[levels - 2][levels - 2] - table[levels - 3][levels - 3]);
      const double floor = 1e-13 * std::max(1.0, std::abs(out.value));
      out.noisy = last > prev && last > floor;
    }
  }
  if (!std::isfinite(out.value)) out.noisy = true;
  return out;
}

}  // namespace lzero
