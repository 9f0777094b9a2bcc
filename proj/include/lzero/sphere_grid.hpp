#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace lzero {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class GridKind { deterministic, stochastic };

/// Quadrature nodes and surface-measure weights on S^{n-1} ⊂ R^n.
///
/// Deterministic grids are built recursively: S^{m} nodes are
/// (sqrt(1-t^2) ω, t) with ω on S^{m-1} and t from a Gauss rule for the
/// weight (1-t^2)^{(m-2)/2}. The polar rule is Gauss-Legendre when that
/// exponent is an integer and Gauss-Chebyshev (second kind) otherwise, so the
/// weights sum to |S^{n-1}| up to rounding. Every deterministic node has its
/// antipode in the grid; `antipode[i]` gives its index.
struct SphereGrid {
  int dim = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  GridKind kind = GridKind::deterministic;
  std::uint64_t seed = 0;
  std::vector<int> antipode;  // empty for stochastic grids

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
};

/// |S^{n-1}| = 2 π^{n/2} / Γ(n/2).
double sphere_area(int n);

/// Volume of the unit ball in R^n.
double ball_volume(int n);

/// Builds a grid on S^{n-1}. Supported dimensions are 2 through 8.
/// For deterministic grids the circle uses 4·resolution points and each
/// polar layer uses `resolution` points.
SphereGrid sphere_grid(int n, int resolution, GridKind kind = GridKind::deterministic,
                       std::uint64_t seed = 0);

/// Σ w_i f(node_i). Node values are evaluated in parallel and summed in node
/// order, so the result does not depend on the thread count.
double integrate_sphere(const std::function<double(const Vec&)>& f, const SphereGrid& grid);

/// Single-threaded reference for integrate_sphere.
double integrate_sphere_serial(const std::function<double(const Vec&)>& f,
                               const SphereGrid& grid);

/// Orthonormal basis (as columns) of the hyperplane orthogonal to the unit vector xi.
Mat orthogonal_complement(const Vec& xi);

}  // namespace lzero
