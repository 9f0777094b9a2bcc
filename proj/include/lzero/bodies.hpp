#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lzero/sphere_grid.hpp"

namespace lzero {

struct Shape;

/// An origin-symmetric star body in R^n, described by its Minkowski functional
///   ‖x‖_K = min{a >= 0 : x ∈ aK}.
///
/// StarBody is an immutable value with shared structure: copies are cheap and
/// gauge evaluation is safe from any number of threads.
class StarBody {
 public:
  StarBody(int dim, std::shared_ptr<const Shape> shape);

  int dim() const { return dim_; }
  const Shape& shape() const { return *shape_; }

  /// Minkowski functional; gauge(0) = 0.
  double gauge(const Vec& x) const;
  /// ρ_K(u) = 1/‖u‖_K for unit u.
  double radial(const Vec& u) const;
  /// Continuous function that is negative inside K, zero on the boundary and
  /// positive outside.
  double boundary_margin(const Vec& x) const;

  /// Matrix M with ‖x‖^2 = xᵀMx, when the body is an ellipsoid.
  std::optional<Mat> quadratic_form() const;

  /// Radii r, R with rB ⊂ K ⊂ RB (R may be a generous estimate).
  double inner_radius() const { return inner_; }
  double outer_radius() const { return outer_; }

  /// Short tag of the top-level representation ("ball", "lq", ...).
  std::string kind() const;

 private:
  int dim_;
  std::shared_ptr<const Shape> shape_;
  double inner_ = 0.0;
  double outer_ = 0.0;
};

struct EuclideanBall {};

struct LqBall {
  double q;
};

/// Semi-axis a along `axis`, b transverse:
///   ‖θ‖ = sqrt((x,θ)^2/a^2 + (|θ|^2 - (x,θ)^2)/b^2).
struct DirectionalEllipsoid {
  Vec axis;
  double a;
  double b;
};

/// ‖x‖ = sqrt(xᵀ M x) with M symmetric positive definite.
struct Ellipsoid {
  Mat form;
};

/// ‖x‖ = ‖T x‖_base.
struct LinearImage {
  Mat transform;
  StarBody base;
};

/// ‖x‖ = sqrt(‖x‖_L ‖x‖_R).
struct MultSum {
  StarBody left;
  StarBody right;
};

/// ‖x‖ = Π ‖x‖_i^{w_i} with Σ w_i = 1.
struct LogBlend {
  std::vector<std::pair<StarBody, double>> parts;
};

/// ‖x‖ = (‖x‖_L^p + ‖x‖_R^p)^{1/p}.
struct PSum {
  double p;
  StarBody left;
  StarBody right;
};

/// Named profile, kept so bodies of revolution can be written back out.
struct ProfileInfo {
  std::string name;  ///< "sphere", "counterexample" or "custom"
  std::vector<double> params;
};

/// {x : |x_perp| <= f(x_axis), |x_axis| <= half_length}.
struct Revolution {
  std::function<double(double)> profile;
  double half_length;
  int axis;
  ProfileInfo info;
  /// Optional exact f(t)^m - f(0)^m, used for cancellation-free section remainders.
  std::function<double(double, int)> power_delta;
};

/// Radial values ρ_i > 0 at the nodes of a sphere grid.
struct Tabulated {
  SphereGrid grid;
  std::vector<double> radii;
  bool interpolate = true;
};

struct Shape {
  std::variant<EuclideanBall, LqBall, DirectionalEllipsoid, Ellipsoid, LinearImage, MultSum,
               LogBlend, PSum, Revolution, Tabulated>
      v;
};

double gauge(const StarBody& body, const Vec& x);

StarBody euclidean_ball(int n);
StarBody lq_ball(int n, double q);
StarBody directional_ellipsoid(const Vec& axis, double a, double b);
StarBody ellipsoid(const Mat& form);

/// K +_0 L: gauge sqrt(‖x‖_K ‖x‖_L).
StarBody mult_sum(const StarBody& k, const StarBody& l);

/// K +_p L for p in [-1, 1] \ {0}.
StarBody p_sum(double p, const StarBody& k, const StarBody& l);

/// Body with gauge ‖T x‖_K. Rejects T with condition number above 1e12.
StarBody linear_image(const Mat& t, const StarBody& k);

/// cK for c > 0, i.e. gauge ‖x‖_K / c.
StarBody scaled(const StarBody& k, double c);

/// Weighted geometric mean of gauges. Weights must be positive and sum to 1.
StarBody log_blend(std::vector<std::pair<StarBody, double>> parts);

/// Body of revolution about coordinate `axis` (default: the last one).
/// The profile must be even, positive on (-half_length, half_length) and
/// vanish at the ends.
StarBody revolution_body(std::function<double(double)> profile, int n, double half_length,
                         int axis = -1, ProfileInfo info = {"custom", {}},
                         std::function<double(double, int)> power_delta = {});

/// Star body from radial samples on a grid.
StarBody tabulated_body(SphereGrid grid, std::vector<double> radii, bool interpolate = true);

/// Grid approximation of the radial metric max_u |ρ_K(u) - ρ_L(u)|.
double radial_distance(const StarBody& k, const StarBody& l, const SphereGrid& grid);

}  // namespace lzero
