#include "lzero/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "lzero/errors.hpp"
#include "lzero/parallel.hpp"
#include "lzero/quadrature.hpp"

namespace lzero {

double EllipsoidProduct::weight_sum() const {
  double s = 0.0;
  for (const EllipsoidPart& p : parts) s += p.weight;
  return s;
}

double directional_gauge(const Vec& xi, double a, double b, const Vec& x) {
  const double c = xi.dot(x);
  const double perp = std::max(0.0, x.squaredNorm() - c * c);
  return std::sqrt(c * c / (a * a) + perp / (b * b));
}

double product_gauge(const EllipsoidProduct& p, const Vec& x) {
  if (x.squaredNorm() == 0.0) return 0.0;
  double s = 0.0;
  for (const EllipsoidPart& part : p.parts) s += part.weight * std::log(directional_gauge(part.xi, part.a, part.b, x));
  return std::exp(s);
}

StarBody product_body(const EllipsoidProduct& p) {
  if (p.parts.empty()) throw InputError("ellipsoid product: no parts");
  std::vector<std::pair<StarBody, double>> parts;
  for (const EllipsoidPart& e : p.parts) parts.emplace_back(directional_ellipsoid(e.xi, e.a, e.b), e.weight);
  return log_blend(std::move(parts));
}

nlohmann::json serialize_product(const EllipsoidProduct& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const EllipsoidPart& e : p.parts)
    out.push_back({{"xi", std::vector<double>(e.xi.data(), e.xi.data() + e.xi.size())},
                   {"a", e.a},
                   {"b", e.b},
                   {"weight", e.weight}});
  return out;
}

EllipsoidProduct parse_product(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InputError("ellipsoid product: expected a non-empty array");
  EllipsoidProduct p;
  try {
    for (const auto& e : j) {
      const auto xi = e.at("xi").get<std::vector<double>>();
      EllipsoidPart part;
      part.xi = Eigen::Map<const Vec>(xi.data(), static_cast<int>(xi.size()));
      part.a = e.at("a").get<double>();
      part.b = e.at("b").get<double>();
      part.weight = e.at("weight").get<double>();
      if (p.dim && p.dim != part.xi.size()) throw InputError("ellipsoid product: parts differ in dimension");
      p.dim = static_cast<int>(part.xi.size());
      if (!(part.a > 0 && part.b > 0 && part.weight > 0))
        throw InputError("ellipsoid product: a, b and weight must be positive");
      part.xi.normalize();
      p.parts.push_back(std::move(part));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("ellipsoid product: ") + e.what());
  }
  if (std::abs(p.weight_sum() - 1.0) > 1e-9) throw InputError("ellipsoid product: weights must sum to 1");
  return p;
}

namespace {

// ∫_{S^{n-1}} g(θ) ‖θ‖_{E_{b,a}(x)}^{-n} dθ with θ = cos φ x + sin φ E ω, folded onto φ ∈ [0, π/2].
double kernel_integral(int n, const Vec& x, double a, double b, const std::function<double(const Vec&)>& g,
                       const SmoothingOptions& opts) {
  const SphereGrid fiber = sphere_grid(n - 1, opts.fiber_resolution);
  const Mat frame = orthogonal_complement(x);
  auto integrand = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double k = std::pow(c * c / (b * b) + s * s / (a * a), -0.5 * n) * std::pow(s, n - 2);
    double inner = 0.0;
    for (std::size_t i = 0; i < fiber.size(); ++i) inner += fiber.weights[i] * g(c * x + s * (frame * fiber.nodes[i]));
    return 2.0 * k * inner;
  };
  const double split = std::min(M_PI / 4, 6.0 * a / b);
  return integrate_1d(integrand, 0.0, split, opts.tol) + integrate_1d(integrand, split, M_PI / 2, opts.tol);
}

void check_ab(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw InputError("smoothing: a and b must be positive");
  if (a > b) throw InputError("smoothing: requires a <= b");
}

}  // namespace

double smoothing_kernel_mass(int n, double a, double b, const SmoothingOptions& opts) {
  check_ab(a, b);
  const Vec x = Vec::Unit(n, n - 1);
  const double integral = kernel_integral(n, x, a, b, [](const Vec&) { return 1.0; }, opts);
  return integral / (sphere_area(n) * std::pow(a, n - 1) * b);
}

double smoothed_log_norm(const StarBody& body, const Vec& x, double a, double b, const SmoothingOptions& opts) {
  check_ab(a, b);
  const int n = body.dim();
  if (x.size() != n) throw InputError("smoothed_log_norm: point has the wrong dimension");
  const Vec u = x.normalized();
  const double mass = smoothing_kernel_mass(n, a, b, opts);
  if (std::abs(mass - 1.0) > 1e-3)
    throw ConvergenceError("smoothed_log_norm: kernel mass off by more than 1e-3 (kernel too peaked)", mass);
  const double integral =
      kernel_integral(n, u, a, b, [&](const Vec& t) { return std::log(body.gauge(t)); }, opts);
  return integral / (sphere_area(n) * std::pow(a, n - 1) * b);
}

std::vector<Atom> discretize_sphere_measure(const std::vector<double>& density, double sigma,
                                            const SphereGrid& grid) {
  if (!(sigma > 0)) throw InputError("discretize_sphere_measure: sigma must be positive");
  if (density.size() != grid.size()) throw InputError("discretize_sphere_measure: density size differs from grid");
  const std::size_t m = grid.size();
  std::vector<double> mass(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(density[i])) throw InputError("discretize_sphere_measure: non-finite density");
    mass[i] = grid.weights[i] * std::max(0.0, density[i]);
    total += mass[i];
  }
  if (!(total > 0)) throw InputError("discretize_sphere_measure: density has no positive mass");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return mass[i] > mass[j]; });
  std::vector<bool> assigned(m, false);
  std::vector<Atom> atoms;
  for (std::size_t c : order) {
    if (assigned[c]) continue;
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (assigned[i] || (grid.nodes[i] - grid.nodes[c]).norm() > sigma) continue;
      assigned[i] = true;
      w += mass[i];
    }
    if (w > 0.0) atoms.push_back({grid.nodes[c], w});
  }
  for (Atom& a : atoms) a.weight /= total;
  return atoms;
}

double sup_log_error(const StarBody& body, const EllipsoidProduct& p, const SphereGrid& check) {
  const std::vector<double> r = parallel_map<double>(check.size(), [&](std::size_t i) {
    return std::abs(std::log(product_gauge(p, check.nodes[i])) - std::log(body.gauge(check.nodes[i])));
  });
  return *std::max_element(r.begin(), r.end());
}

FitResult fit_ellipsoid_product(const StarBody& body, const std::vector<double>& density, const SphereGrid& grid,
                                double a, double b, double sigma, const SphereGrid& check) {
  check_ab(a, b);
  if (!(sigma > 0 && sigma < 1)) throw InputError("fit_ellipsoid_product: sigma must lie in (0, 1)");
  const std::vector<Atom> atoms = discretize_sphere_measure(density, sigma, grid);
  FitResult fit;
  fit.product.dim = body.dim();
  for (const Atom& at : atoms) fit.product.parts.push_back({at.xi, a, b, at.weight});

  const std::vector<double> r = parallel_map<double>(check.size(), [&](std::size_t i) {
    return std::log(body.gauge(check.nodes[i])) - std::log(product_gauge(fit.product, check.nodes[i]));
  });
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  fit.shift = 0.5 * (*lo + *hi);
  fit.sup_log_error = 0.5 * (*hi - *lo);

  // Σ w_i = 1, so shrinking every ellipsoid by e^{-C'} multiplies the product by e^{C'}
  const double scale = std::exp(-fit.shift);
  for (EllipsoidPart& part : fit.product.parts) {
    part.a *= scale;
    part.b *= scale;
  }
  if (fit.sup_log_error > 0.05) fit.diagnostic = "sup-log error above 0.05; refine a and sigma";
  return fit;
}

FitResult fit_ellipsoid_product(const StarBody& body, double a, double b, double sigma, const FitOptions& opts) {
  const int n = body.dim();
  const SphereGrid grid = sphere_grid(n, opts.grid_resolution);
  const EmbeddingReport rep = embeds_in_L0(body, grid, opts.embedding);
  if (rep.verdict == Verdict::fails) throw InputError("fit_ellipsoid_product: the body does not embed in L0");
  if (rep.verdict == Verdict::inconclusive)
    throw ConvergenceError("fit_ellipsoid_product: embedding test inconclusive", rep.min_margin);
  std::vector<double> density;
  for (const DirectionResult& d : rep.per_direction) density.push_back(d.density);
  return fit_ellipsoid_product(body, density, grid, a, b, sigma, sphere_grid(n, opts.check_resolution));
}

EllipsoidProduct dyadicize_weights(const EllipsoidProduct& p, int depth) {
  if (depth < 1 || depth > 52) throw InputError("dyadicize_weights: depth must lie in [1, 52]");
  if (p.parts.empty()) throw InputError("dyadicize_weights: empty product");
  EllipsoidProduct out;
  out.dim = p.dim;
  // round the running sums to multiples of 2^{-depth}; each part gets the
  // difference of consecutive rounded sums
  double running = 0.0;
  std::int64_t prev = 0;
  for (const EllipsoidPart& part : p.parts) {
    running += part.weight;
    const std::int64_t cur = std::llround(std::ldexp(running, depth));
    const std::int64_t units = std::max<std::int64_t>(cur - prev, 0);
    prev = std::max(prev, cur);
    for (int i = 0; i <= depth; ++i) {
      if (!((units >> (depth - i)) & 1)) continue;
      EllipsoidPart piece = part;
      piece.weight = std::ldexp(1.0, -i);
      out.parts.push_back(piece);
      if (out.parts.size() > 10'000) throw InputError("dyadicize_weights: more than 10000 parts");
    }
  }
  if (out.parts.empty()) {
    const auto big = std::max_element(p.parts.begin(), p.parts.end(),
                                      [](const EllipsoidPart& x, const EllipsoidPart& y) { return x.weight < y.weight; });
    out.parts.push_back(*big);
    out.parts.back().weight = 0.0;
  }
  double sum = 0.0;
  for (const EllipsoidPart& e : out.parts) sum += e.weight;
  auto big = std::max_element(out.parts.begin(), out.parts.end(),
                              [](const EllipsoidPart& x, const EllipsoidPart& y) { return x.weight < y.weight; });
  big->weight += 1.0 - sum;
  return out;
}

double psum_gauge(const PSumFit& fit, const Vec& x) {
  double s = 0.0;
  for (const Mat& m : fit.forms) s += std::pow(x.dot(m * x), 0.5 * fit.p);
  return std::pow(s, 1.0 / fit.p);
}

namespace {

bool collect_leaves(const StarBody& body, double p, std::vector<Mat>& out) {
  if (const auto* s = std::get_if<PSum>(&body.shape().v)) {
    if (s->p != p) return false;
    return collect_leaves(s->left, p, out) && collect_leaves(s->right, p, out);
  }
  if (auto m = body.quadratic_form()) {
    out.push_back(*m);
    return true;
  }
  return false;
}

Mat directional_form(const Vec& xi, double a, double b) {
  const int n = static_cast<int>(xi.size());
  Mat m = Mat::Identity(n, n) / (b * b);
  m += (1.0 / (a * a) - 1.0 / (b * b)) * xi * xi.transpose();
  return m;
}

// (‖x‖^s)^∧(ξ) = π(-s)/cos(qπ/2) · A^{(q)}(0), q = n - 1 + s
double power_ft(const StarBody& body, const Vec& xi, double s, const Tolerances& tol) {
  const int n = body.dim();
  const double q = n - 1 + s;
  SectionOptions so;
  so.tol = tol;
  so.taylor_order = std::min(6, 2 * static_cast<int>(std::ceil((q + 1e-3) / 2.0)));
  const SectionProfile profile(body, xi, so);
  return M_PI * (-s) / std::cos(q * M_PI / 2.0) * fractional_derivative(profile, q).value;
}

double sup_abs_residual(const std::vector<double>& f, const std::vector<double>& s, double lambda) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - lambda * s[i]));
  return m;
}

}  // namespace

PSumFit fit_psum(const StarBody& body, double p, const PSumParams& params) {
  if (p == 0.0) throw InputError("fit_psum: p = 0, use fit_ellipsoid_product");
  if (!(p > -1 && p < 1)) throw InputError("fit_psum: p must lie in (-1, 1)");
  const int n = body.dim();
  const SphereGrid check = sphere_grid(n, params.check_resolution);
  PSumFit fit;
  fit.p = p;

  auto residual = [&](const PSumFit& f) {
    const std::vector<double> r = parallel_map<double>(check.size(), [&](std::size_t i) {
      const Vec& x = check.nodes[i];
      double s = 0.0;
      for (const Mat& m : f.forms) s += std::pow(x.dot(m * x), 0.5 * p);
      return std::abs(std::pow(body.gauge(x), p) - s);
    });
    return *std::max_element(r.begin(), r.end());
  };

  if (collect_leaves(body, p, fit.forms)) {
    fit.exact = true;
    fit.sup_error = residual(fit);
    return fit;
  }
  fit.forms.clear();

  check_ab(params.a, params.b);
  const SphereGrid grid = sphere_grid(n, params.grid_resolution);
  const std::vector<double> raw = parallel_map<double>(grid.size(), [&](std::size_t i) {
    return power_ft(body, grid.nodes[i], p, params.embedding.transform.tol);
  });
  std::vector<double> sorted = raw;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double sign = sorted[sorted.size() / 2] < 0 ? -1.0 : 1.0;
  std::vector<double> density(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) density[i] = std::max(0.0, sign * raw[i]);
  const std::vector<Atom> atoms = discretize_sphere_measure(density, params.sigma, grid);

  std::vector<double> f(check.size()), s(check.size(), 0.0);
  for (std::size_t i = 0; i < check.size(); ++i) {
    const Vec& x = check.nodes[i];
    f[i] = std::pow(body.gauge(x), p);
    for (const Atom& at : atoms) s[i] += at.weight * std::pow(directional_gauge(at.xi, params.a, params.b, x), p);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    lo = std::min(lo, f[i] / s[i]);
    hi = std::max(hi, f[i] / s[i]);
  }
  // sup |f - λ s| is convex in λ
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (sup_abs_residual(f, s, m1) <= sup_abs_residual(f, s, m2))
      hi = m2;
    else
      lo = m1;
  }
  const double lambda = 0.5 * (lo + hi);
  for (const Atom& at : atoms)
    fit.forms.push_back(std::pow(lambda * at.weight, 2.0 / p) * directional_form(at.xi, params.a, params.b));
  fit.sup_error = residual(fit);
  return fit;
}

}  // namespace lzero
