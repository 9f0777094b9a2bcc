#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lzero/bodies.hpp"
#include "lzero/embedding.hpp"
#include "lzero/tolerances.hpp"

namespace lzero {

/// Directional ellipsoid E_{a,b}(xi) with its exponent 1/p in a product.
struct EllipsoidPart {
  Vec xi;
  double a = 1.0;
  double b = 1.0;
  double weight = 1.0;
};

/// Gauge Π ‖x‖_{E_i}^{w_i} with Σ w_i = 1.
struct EllipsoidProduct {
  int dim = 0;
  std::vector<EllipsoidPart> parts;
  double weight_sum() const;
};

/// Gauge of E_{a,b}(xi): sqrt((x,ξ)^2/a^2 + (|x|^2 - (x,ξ)^2)/b^2).
double directional_gauge(const Vec& xi, double a, double b, const Vec& x);

/// Product gauge, accumulated in log space.
double product_gauge(const EllipsoidProduct& p, const Vec& x);

/// The product as a LogBlend body of directional ellipsoids.
StarBody product_body(const EllipsoidProduct& p);

/// [{"xi": [...], "a": .., "b": .., "weight": ..}, ...]
nlohmann::json serialize_product(const EllipsoidProduct& p);
EllipsoidProduct parse_product(const nlohmann::json& j);

struct SmoothingOptions {
  Tolerances tol = [] {
    Tolerances t;
    t.quad_rel = 1e-8;
    return t;
  }();
  int fiber_resolution = 12;
};

/// f_{a,b}(x) = (|S^{n-1}| a^{n-1} b)^{-1} ∫ ln‖θ‖_K ‖θ‖_{E_{b,a}(x)}^{-n} dθ.
/// Computed in polar coordinates about x with the kernel mass checked to 1e-3.
double smoothed_log_norm(const StarBody& body, const Vec& x, double a, double b,
                         const SmoothingOptions& opts = {});

/// Mass of the smoothing kernel with the same quadrature (exactly 1 in theory).
double smoothing_kernel_mass(int n, double a, double b, const SmoothingOptions& opts = {});

struct Atom {
  Vec xi;
  double weight = 0.0;
};

/// Greedy covering of the grid by chordal σ-caps, visiting nodes in order of
/// decreasing mass w_i·density_i (ties by index). Each node is assigned to the
/// first cap that contains it; atoms sit at the cap centers with the assigned
/// mass, normalized to total 1. Zero-mass caps are dropped.
std::vector<Atom> discretize_sphere_measure(const std::vector<double>& density, double sigma,
                                            const SphereGrid& grid);

struct FitOptions {
  int grid_resolution = 16;   ///< grid for the spectral density
  int check_resolution = 21;  ///< grid for the sup-log error
  EmbeddingOptions embedding;
};

struct FitResult {
  EllipsoidProduct product;
  double sup_log_error = 0.0;
  double shift = 0.0;  ///< absorbed constant C'
  std::string diagnostic;
};

/// Ellipsoid-product approximant of an L0-embeddable body: atoms E_{a,b}(ξ_i)
/// from the discretized spectral measure, then the constant shift absorbed by
/// rescaling every ellipsoid by e^{-C'}. Throws InputError when the body
/// does not embed.
FitResult fit_ellipsoid_product(const StarBody& body, double a, double b, double sigma,
                                const FitOptions& opts = {});

/// Same, reusing a density already computed on `grid`.
FitResult fit_ellipsoid_product(const StarBody& body, const std::vector<double>& density, const SphereGrid& grid,
                                double a, double b, double sigma, const SphereGrid& check);

/// max over the grid of |ln product_gauge - ln gauge_K|.
double sup_log_error(const StarBody& body, const EllipsoidProduct& p, const SphereGrid& check);

/// Replaces each weight by a multiple of 2^{-depth}, written as its binary
/// digits with one copy of the ellipsoid per nonzero bit. The running sums of
/// the weights are rounded, so rounding errors do not accumulate; any
/// floating-point remainder goes to the largest part and the weights sum to 1.
EllipsoidProduct dyadicize_weights(const EllipsoidProduct& p, int depth);

struct PSumFit {
  double p = 0.0;
  std::vector<Mat> forms;  ///< ellipsoids ‖x‖^2 = xᵀ M x
  double sup_error = 0.0;  ///< sup |‖x‖_K^p - Σ ‖x‖_{E_i}^p| on the check grid
  bool exact = false;      ///< structural decomposition of a p-sum of ellipsoids
};

struct PSumParams {
  double a = 0.2;
  double b = 1.0;
  double sigma = 0.2;
  int grid_resolution = 12;
  int check_resolution = 17;
  EmbeddingOptions embedding;
};

/// (Σ_i ‖x‖_{E_i}^p)^{1/p}
double psum_gauge(const PSumFit& fit, const Vec& x);

/// Finite sum Σ ‖x‖_{E_i}^p approximating ‖x‖_K^p, p in (-1, 1) \ {0}.
/// p-sums of ellipsoids with the same p are decomposed exactly; otherwise the
/// density of (‖x‖^p)^∧ on the sphere is discretized into atoms E_{a,b}(ξ_i)
/// and a global scale is fitted by minimax.
PSumFit fit_psum(const StarBody& body, double p, const PSumParams& params = {});

}  // namespace lzero
