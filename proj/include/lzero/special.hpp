#pragma once

namespace lzero {

/// ψ(x) = Γ'(x)/Γ(x) for x > 0. Throws InputError otherwise.
double digamma(double x);

}  // namespace lzero
