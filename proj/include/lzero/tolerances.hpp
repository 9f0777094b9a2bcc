#pragma once

namespace lzero {

/// Every numerical knob used by the library. Defaults are tuned for
/// desk-scale runs in dimensions 3 to 6.
struct Tolerances {
  double quad_rel = 1e-10;       ///< relative target for 1-D quadrature
  double quad_abs = 1e-13;       ///< absolute target for 1-D quadrature
  double deriv_step = 1e-2;      ///< finite-difference base step for order 2, relative to the support (x4 per extra order pair)
  int richardson_levels = 3;     ///< number of step halvings (h, h/2, h/4 for 3)
  double root_tol = 1e-14;       ///< bracket width accepted by root finding
  int sphere_resolution = 16;    ///< base resolution for sphere and slice grids
  int quad_refinements = 15;     ///< level cap for tanh-sinh and exp-sinh

  /// Throws InputError if any field is non-positive.
  void validate() const;
};

}  // namespace lzero
