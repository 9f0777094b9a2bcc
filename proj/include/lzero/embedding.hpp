#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "lzero/bodies.hpp"
#include "lzero/sections.hpp"
#include "lzero/tolerances.hpp"

namespace lzero {

enum class Verdict { embeds, fails, inconclusive };

const char* to_string(Verdict v);

struct TransformOptions {
  Tolerances tol;
  SliceMethod method = SliceMethod::automatic;
};

/// A transform value on the unit sphere with its numerical health.
struct TransformValue {
  double value = 0.0;
  double error = 0.0;   ///< estimated absolute error
  bool noisy = false;   ///< finite differences or near-zero quadrature were unstable
  /// Noisy and the error estimate does not exclude the opposite sign.
  bool sign_uncertain() const { return noisy && std::abs(value) <= error; }
};

/// (ln‖x‖_K)^∧(ξ) for unit ξ, 3 <= n <= 6:
///   odd n:  (-1)^{(n+1)/2} π A^{(n-1)}(0)
///   even n: a_n I(ξ), a_n = 2 (-1)^{n/2+1} (n-1)!
TransformValue log_ft(const StarBody& body, const Vec& xi, const TransformOptions& opts = {});

/// Degree -n homogeneous extension: log_ft(body, y/|y|) |y|^{-n}.
TransformValue log_ft_homogeneous(const StarBody& body, const Vec& y, const TransformOptions& opts = {});

/// Exact transform of ln‖x‖ for the directional ellipsoid E_{a,b}(x):
///   -2^{n-1} π^{n/2} Γ(n/2) / (a^{n-1} b) · ‖θ‖_{E_{b,a}(x)}^{-n}.
double log_ft_ellipsoid_closed_form(const Vec& x, double a, double b, const Vec& theta, int n);

struct DirectionResult {
  Vec xi;
  double log_ft = 0.0;
  double error = 0.0;
  double density = 0.0;  ///< -(2π)^{-n} log_ft
  bool noisy = false;
  bool inconclusive = false;
};

struct Witness {
  Vec xi;
  double value = 0.0;  ///< transform value at xi
};

struct EmbeddingReport {
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> witness;
  double min_margin = 0.0;  ///< min of -log_ft over the grid and the searched directions
  double tolerance = 0.0;   ///< absolute verdict tolerance used
  double constant_C = 0.0;
  double mass = 0.0;        ///< Σ w_i density_i
  std::size_t inconclusive_count = 0;
  std::vector<DirectionResult> per_direction;  ///< one entry per grid node
  std::vector<double> weights;                 ///< grid weights, same order
  bool has_density = false;
};

struct EmbeddingOptions {
  TransformOptions transform;
  double relative_tol = 1e-6;           ///< tolerance relative to median |log_ft|
  std::optional<double> absolute_tol;   ///< overrides relative_tol when set
  double max_inconclusive = 0.05;
  bool serial = false;                  ///< evaluate the sweep with the serial reference loop
  int refine_evaluations = 120;         ///< per-start budget of the local search between grid nodes; 0 disables
};

/// Sign test of -log_ft over the grid directions. Each antipodal pair is
/// evaluated once. When the grid finds no negative direction, the coordinate
/// directions are tested too, and a pattern search on the sphere started from
/// local minima of the sweep looks for one between the nodes.
EmbeddingReport embeds_in_L0(const StarBody& body, const SphereGrid& grid, const EmbeddingOptions& opts = {});

struct DensitySample {
  Vec node;
  double density = 0.0;
};

/// Density of the representing measure, -(2π)^{-n} log_ft, at the grid nodes.
/// Throws InputError naming a witness direction when the body fails the test.
std::vector<DensitySample> spectral_measure_density(const StarBody& body, const SphereGrid& grid,
                                                    const EmbeddingOptions& opts = {});

/// Mean of ln‖θ‖_K over the sphere plus (ψ(n/2) - ψ(1/2)) / 2.
double embedding_constant(const StarBody& body, const SphereGrid& grid);

struct RepresentationReport {
  double max_residual = 0.0;
  std::vector<double> residuals;
  bool pass = false;
};

struct RepresentationOptions {
  int fiber_resolution = 16;  ///< circle/sphere resolution for the fibers around x
  int radial_points = 24;     ///< Gauss points per band in the polar variable
};

/// Residuals |ln‖x‖_K - ∫ ln|(x,ξ)| density(ξ) dξ - C| at the sample points.
/// The sphere integral uses polar coordinates about x; the logarithmic
/// singularity at (x, ξ) = 0 is removed by the substitution t = s^3.
RepresentationReport verify_log_representation(const StarBody& body,
                                               const std::function<double(const Vec&)>& density, double C,
                                               const std::vector<Vec>& sample_points, double tol,
                                               const RepresentationOptions& opts = {});

struct NegPReport {
  Verdict verdict = Verdict::inconclusive;
  double p = 0.0;
  double q = 0.0;
  bool exceptional = false;  ///< q an odd integer: averaged over q ± 1e-3
  double min_value = 0.0;
  double tolerance = 0.0;
  std::optional<Witness> witness;
  std::vector<DirectionResult> per_direction;  ///< log_ft field holds the power transform
};

/// (‖x‖_K^{-p})^∧(ξ) = π p / cos(qπ/2) · A^{(q)}(0), q = n - 1 - p, for unit ξ.
TransformValue neg_power_ft(const StarBody& body, const Vec& xi, double p, const TransformOptions& opts = {},
                            bool* exceptional = nullptr);

/// Embeds in L_{-p} iff the transform above is >= -tol in every grid direction,
/// coordinate direction and refined minimum (same search as embeds_in_L0).
NegPReport neg_p_embed_test(const StarBody& body, double p, const SphereGrid& grid,
                            const EmbeddingOptions& opts = {});

}  // namespace lzero
