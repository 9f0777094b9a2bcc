#include "lzero/tolerances.hpp"

#include "lzero/errors.hpp"

namespace lzero {

void Tolerances::validate() const {
  if (!(quad_rel > 0) || !(quad_abs > 0) || !(deriv_step > 0) || !(root_tol > 0) ||
      sphere_resolution < 1 || richardson_levels < 1 || quad_refinements < 1)
    throw InputError("tolerances: all fields must be positive and richardson_levels >= 1");
}

}  // namespace lzero
