#include "lzero/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lzero/errors.hpp"

namespace lzero {
namespace {

void check(double estimate, double error, double l1, const Tolerances& tol, const char* who) {
  if (!std::isfinite(estimate))
    throw ConvergenceError(std::string(who) + ": non-finite estimate", estimate);
  const double target = std::max(tol.quad_abs, tol.quad_rel * std::max(std::abs(estimate), l1 * 1e-3));
  // The quadrature error estimates are conservative; accept up to 100x.
  if (error > 100.0 * target && error > 1e-6 * std::max(1.0, l1))
    throw ConvergenceError(std::string(who) + ": no convergence (error estimate " +
                               std::to_string(error) + ")",
                           estimate);
}

}  // namespace

const GaussRule& gauss_legendre_rule(int n) {
  static std::mutex m;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule t;
  t.x.resize(n);
  t.w.resize(n);
  auto legendre = [n](double z, double& p0, double& p1) {
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(z, p0, p1);
      double dz = p0 / (n * (z * p0 - p1) / (z * z - 1.0));
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre(z, p0, p1);
    const double dp = n * (z * p0 - p1) / (z * z - 1.0);
    t.x[i] = -z;
    t.x[n - 1 - i] = z;
    t.w[i] = t.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2) t.x[n / 2] = 0.0;
  return cache.emplace(n, std::move(t)).first->second;
}

double gauss_legendre_fixed(const std::function<double(double)>& f, double a, double b, int points) {
  const GaussRule& t = gauss_legendre_rule(points);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < points; ++i) s += t.w[i] * f(mid + half * t.x[i]);
  return s * half;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const Tolerances& tol, EndpointHint hint) {
  using namespace boost::math::quadrature;
  if (std::isnan(a) || std::isnan(b)) throw InputError("integrate_1d: NaN bound");
  if (a == b) return 0.0;
  if (std::isinf(a)) throw InputError("integrate_1d: lower bound must be finite");
  if (b < a) return -integrate_1d(f, b, a, tol, hint);

  double error = 0.0, l1 = 0.0;
  double value = 0.0;
  const double rel = std::max(tol.quad_rel, 1e-15);
  if (std::isinf(b)) {
    exp_sinh<double> integrator(tol.quad_refinements);
    auto g = [&](double t) { return f(a + t); };
    value = integrator.integrate(g, rel, &error, &l1);
    check(value, error, l1, tol, "integrate_1d[exp_sinh]");
    return value;
  }
  if (hint.kind == EndpointHint::Kind::power_singularity) {
    if (hint.alpha <= -1.0) throw InputError("integrate_1d: non-integrable power singularity");
    tanh_sinh<double> integrator(tol.quad_refinements);
    value = integrator.integrate(f, a, b, rel, &error, &l1);
    check(value, error, l1, tol, "integrate_1d[tanh_sinh]");
    return value;
  }
  // shift near-zero integrands so the adaptive rule can stop
  double coarse_l1 = 0.0;
  const double coarse = gauss_kronrod<double, 15>::integrate(f, a, b, 0, rel, nullptr, &coarse_l1);
  const double floor = std::max(1e-3 * coarse_l1, tol.quad_abs / rel);
  double shift = 0.0;
  if (std::abs(coarse) < floor) shift = (coarse < 0 ? -floor : floor) / (b - a);
  if (shift == 0.0) {
    value = gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel, &error, &l1);
  } else {
    auto g = [&](double t) { return f(t) + shift; };
    value = gauss_kronrod<double, 15>::integrate(g, a, b, 20, rel, &error, &l1) - shift * (b - a);
    l1 = std::max(0.0, l1 - std::abs(shift) * (b - a));
  }
  check(value, error, l1, tol, "integrate_1d[gauss_kronrod]");
  return value;
}

}  // namespace lzero
