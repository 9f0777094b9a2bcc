#include "lzero/sphere_grid.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lzero/errors.hpp"
#include "lzero/parallel.hpp"
#include "lzero/quadrature.hpp"

namespace lzero {
namespace {

constexpr std::size_t kMaxNodes = 20'000'000;

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes and weights for ∫_{-1}^{1} f(t) (1-t^2)^{e} dt with e = (m-2)/2.
Rule polar_rule(int m, int n) {
  Rule r;
  if (m % 2 == 0) {
    const GaussRule& gl = gauss_legendre_rule(n);
    r.x = gl.x;
    r.w = gl.w;
    const int power = (m - 2) / 2;
    for (int i = 0; i < n; ++i) r.w[i] *= std::pow(1.0 - r.x[i] * r.x[i], power);
  } else {
    // Chebyshev second kind handles (1-t^2)^{1/2}; the rest is a polynomial factor.
    r.x.resize(n);
    r.w.resize(n);
    const int power = (m - 3) / 2;
    for (int i = 1; i <= n; ++i) {
      double th = std::numbers::pi * i / (n + 1);
      double s = std::sin(th);
      double t = std::cos(th);
      r.x[n - i] = t;
      r.w[n - i] = std::numbers::pi / (n + 1) * s * s * std::pow(s * s, power);
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
  }
  return r;
}

SphereGrid circle(int count) {
  SphereGrid g;
  g.dim = 2;
  const double w = 2.0 * std::numbers::pi / count;
  for (int j = 0; j < count; ++j) {
    double phi = 2.0 * std::numbers::pi * j / count;
    Vec v(2);
    v << std::cos(phi), std::sin(phi);
    g.nodes.push_back(v);
    g.weights.push_back(w);
    g.antipode.push_back((j + count / 2) % count);
  }
  return g;
}

SphereGrid deterministic(int n, int resolution) {
  if (n == 2) return circle(4 * resolution);
  SphereGrid sub = deterministic(n - 1, resolution);
  Rule rule = polar_rule(n - 1, resolution);
  SphereGrid g;
  g.dim = n;
  const std::size_t m = sub.size();
  const std::size_t total = m * rule.x.size();
  if (total > kMaxNodes) throw InputError("sphere grid too large: resolution overflow");
  g.nodes.reserve(total);
  g.weights.reserve(total);
  g.antipode.reserve(total);
  const int layers = static_cast<int>(rule.x.size());
  for (int i = 0; i < layers; ++i) {
    const double t = rule.x[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t j = 0; j < m; ++j) {
      Vec v(n);
      v.head(n - 1) = s * sub.nodes[j];
      v(n - 1) = t;
      v.normalize();
      g.nodes.push_back(std::move(v));
      g.weights.push_back(rule.w[i] * sub.weights[j]);
      g.antipode.push_back(static_cast<int>((layers - 1 - i) * m + sub.antipode[j]));
    }
  }
  return g;
}

}  // namespace

double SphereGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

SphereGrid sphere_grid(int n, int resolution, GridKind kind, std::uint64_t seed) {
  if (n < 2) throw InputError("sphere_grid: dimension must be at least 2");
  if (n > 8) throw InputError("sphere_grid: dimension " + std::to_string(n) + " unsupported (max 8)");
  if (resolution < 1) throw InputError("sphere_grid: resolution must be positive");
  if (kind == GridKind::deterministic) {
    const double estimate = 4.0 * std::pow(static_cast<double>(resolution), n - 1);
    if (estimate > static_cast<double>(kMaxNodes))
      throw InputError("sphere grid too large: resolution overflow");
    return deterministic(n, resolution);
  }
  // Stochastic: uniform points from normalized Gaussians, equal weights.
  const double estimate = 4.0 * std::pow(static_cast<double>(resolution), n - 1);
  if (estimate > static_cast<double>(kMaxNodes))
    throw InputError("sphere grid too large: resolution overflow");
  const std::size_t count = static_cast<std::size_t>(estimate);
  SphereGrid g;
  g.dim = n;
  g.kind = GridKind::stochastic;
  g.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double w = sphere_area(n) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec v(n);
    do {
      for (int k = 0; k < n; ++k) v(k) = normal(rng);
    } while (v.norm() < 1e-12);
    v.normalize();
    g.nodes.push_back(std::move(v));
    g.weights.push_back(w);
  }
  return g;
}

namespace {
double checked_sum(const std::vector<double>& values, const SphereGrid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::string where;
      for (int k = 0; k < grid.nodes[i].size(); ++k)
        where += (k ? "," : "") + std::to_string(grid.nodes[i](k));
      throw ConvergenceError("integrate_sphere: non-finite integrand at node " +
                                 std::to_string(i) + " (" + where + ")",
                             s);
    }
    s += grid.weights[i] * values[i];
  }
  return s;
}
}  // namespace

double integrate_sphere(const std::function<double(const Vec&)>& f, const SphereGrid& grid) {
  auto values = parallel_map<double>(grid.size(), [&](std::size_t i) { return f(grid.nodes[i]); });
  return checked_sum(values, grid);
}

double integrate_sphere_serial(const std::function<double(const Vec&)>& f,
                               const SphereGrid& grid) {
  auto values = serial_map<double>(grid.size(), [&](std::size_t i) { return f(grid.nodes[i]); });
  return checked_sum(values, grid);
}

Mat orthogonal_complement(const Vec& xi) {
  const int n = static_cast<int>(xi.size());
  // Householder reflection mapping xi to ±e_1; its remaining columns span xi^⊥.
  Vec v = xi;
  const double sign = xi(0) >= 0 ? 1.0 : -1.0;
  v(0) += sign * xi.norm();
  Mat h = Mat::Identity(n, n);
  const double vv = v.squaredNorm();
  if (vv > 0) h -= 2.0 * v * v.transpose() / vv;
  return h.rightCols(n - 1);
}

}  // namespace lzero
