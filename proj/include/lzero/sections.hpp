#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "lzero/bodies.hpp"
#include "lzero/finite_difference.hpp"
#include "lzero/tolerances.hpp"

namespace lzero {

enum class SliceMethod {
  automatic,        ///< closed form when available, radial slices otherwise
  closed_form,      ///< ellipsoids, and bodies of revolution along their axis
  radial_slice,     ///< slice volume from boundary radii about a point of the slice
  montecarlo_slice  ///< hit-or-miss in the hyperplane; values only
};

const char* to_string(SliceMethod m);

struct SectionOptions {
  Tolerances tol;
  SliceMethod method = SliceMethod::automatic;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 200'000;
  /// Highest even derivative order precomputed at construction.
  int taylor_order = 0;
};

/// Parallel section function A(t) = vol_{n-1}(K ∩ {(x, ξ) = t}) of a body in a
/// fixed direction, with its even Taylor coefficients at 0.
///
/// Radial slices are taken about the point t·v, where v = p/(p, ξ) and p is
/// the boundary point of K maximizing (x, ξ). For convex K this point lies in
/// every non-empty slice, so each slice is star-shaped about it.
///
/// The profile is immutable after construction; all methods are safe to call
/// concurrently.
class SectionProfile {
 public:
  SectionProfile(StarBody body, Vec xi, SectionOptions opts = {});

  const StarBody& body() const { return body_; }
  const Vec& direction() const { return xi_; }
  SliceMethod method() const { return method_; }
  const SectionOptions& options() const { return opts_; }

  /// Support value h_K(ξ); A(t) = 0 for |t| > support().
  double support() const { return support_; }

  double value(double t) const;
  /// A(t) - A(0), evaluated without cancellation where the method allows it.
  double delta(double t) const;
  /// A(t) - Σ_{j even, j <= order} A^{(j)}(0) t^j / j!.
  double taylor_remainder(double t, int order) const;

  /// d^k A / dt^k at 0 for even k. Cached up to options().taylor_order.
  DerivativeEstimate derivative(int k) const;

  /// Monte Carlo slice volume with its standard error.
  std::pair<double, double> montecarlo_value(double t) const;

  /// Equispaced samples of A on [0, support()].
  std::vector<std::pair<double, double>> samples(int count) const;

 private:
  enum class Closed { none, quadric, revolution_axis };

  double radial_slice_value(double t) const;
  double radial_slice_delta(double t) const;
  double slice_radius(const Vec& center, int node) const;
  void locate_support();
  DerivativeEstimate compute_derivative(int k) const;

  StarBody body_;
  Vec xi_;
  SectionOptions opts_;
  SliceMethod method_ = SliceMethod::radial_slice;
  Closed closed_ = Closed::none;
  int dim_ = 0;
  double support_ = 0.0;
  Vec center_dir_;            // v with (v, ξ) = 1
  double central_area_ = 0.0; // quadric A(0)
  Mat frame_;                 // basis of ξ^⊥
  SphereGrid fiber_;          // S^{n-2}
  std::vector<double> base_radii_;
  std::vector<DerivativeEstimate> taylor_;  // index k/2
};

/// Cancellation-free evaluation of
///   ∫_0^∞ t^{-1-q} [f(t) - Σ_{j even <= order} c_j t^j / j!] dt
/// for an even f that vanishes beyond `support` (support may be infinite).
/// `remainder(t)` must return the bracket for 0 < t <= support, and
/// `coefficients[j/2]` holds c_j. The integral is split into a near-zero band
/// (Gauss-Legendre after the substitution t = z0 s^β that removes the
/// t^{m-1-q} singularity), a middle band (tanh-sinh), and a closed-form tail.
struct RegularizedIntegral {
  double value = 0.0;
  double error = 0.0;  ///< near-band rule spread plus Taylor coefficient errors
  bool noisy = false;  ///< near-band rules disagreed
};

RegularizedIntegral regularized_power_integral(const std::function<double(double)>& remainder, double q,
                                               int order, double support,
                                               const std::vector<double>& coefficients,
                                               const Tolerances& tol,
                                               const std::vector<double>& coefficient_errors = {});

/// A(t) for one value of t.
double section_value(const StarBody& body, const Vec& xi, double t, SliceMethod method = SliceMethod::automatic,
                     const Tolerances& tol = {}, std::uint64_t seed = 0);

/// d^k A/dt^k (0) for even k, which equals the integer-order fractional
/// derivative A^{(k)}(0).
DerivativeEstimate section_derivative_at_zero(const StarBody& body, const Vec& xi, int k,
                                              const SectionOptions& opts = {});

struct FractionalDerivative {
  double value = 0.0;
  double error = 0.0;
  bool noisy = false;
};

/// f^{(q)}(0) = Γ(-q)^{-1} ∫_0^∞ t^{-1-q} (f(t) - Taylor_{m-1}(t)) dt, m = ⌈q⌉.
/// Rejects integer q.
FractionalDerivative fractional_derivative(const SectionProfile& profile, double q);

/// Same definition for a plain even function supported on [-support, support]
/// (support may be infinite); Taylor data come from finite differences.
FractionalDerivative fractional_derivative(const std::function<double(double)>& f, double q,
                                           double support, const Tolerances& tol = {});

/// Even n only:
///   I(ξ) = ∫_0^∞ [A(z) - A(0) - A''(0) z^2/2 - ... - A^{(n-2)}(0) z^{n-2}/(n-2)!] / z^n dz.
RegularizedIntegral regularized_section_integral(const SectionProfile& profile);
RegularizedIntegral regularized_section_integral(const StarBody& body, const Vec& xi,
                                                 const SectionOptions& opts = {});

/// CSV with header "t,A" and `count` equispaced rows on [0, support].
void write_section_csv(std::ostream& out, const SectionProfile& profile, int count);

}  // namespace lzero
