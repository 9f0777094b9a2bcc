#include "lzero/sections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <string>

#include "lzero/errors.hpp"
#include "lzero/quadrature.hpp"
#include "lzero/random.hpp"
#include "lzero/roots.hpp"

namespace lzero {
namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

// Fiber grid resolution on S^{n-2}: about 64, 400, 1372, 2500 nodes for n = 3..6
// at the default base resolution of 16.
int fiber_resolution(int n, int base) {
  static const double factor[] = {1.0, 1.0, 1.0, 1.0, 0.625, 0.4375, 0.3125, 0.25, 0.1875};
  const double f = factor[std::clamp(n, 0, 8)];
  return std::max(3, static_cast<int>(std::lround(base * f)));
}

// a^m - b^m without forming the two powers separately.
double power_difference(double a, double b, int m) {
  double s = 0.0, ap = 1.0;
  for (int i = 0; i < m; ++i) {
    s += ap * std::pow(b, m - 1 - i);
    ap *= a;
  }
  return (a - b) * s;
}

double binomial(double alpha, int j) {
  double c = 1.0;
  for (int i = 0; i < j; ++i) c *= (alpha - i) / (i + 1.0);
  return c;
}

}  // namespace

const char* to_string(SliceMethod m) {
  switch (m) {
    case SliceMethod::automatic: return "automatic";
    case SliceMethod::closed_form: return "closed_form";
    case SliceMethod::radial_slice: return "radial_slice";
    case SliceMethod::montecarlo_slice: return "montecarlo_slice";
  }
  return "?";
}

SectionProfile::SectionProfile(StarBody body, Vec xi, SectionOptions opts)
    : body_(std::move(body)), xi_(std::move(xi)), opts_(opts) {
  opts_.tol.validate();
  dim_ = body_.dim();
  if (xi_.size() != dim_) throw InputError("section profile: direction has the wrong dimension");
  const double len = xi_.norm();
  if (!(len > 0) || std::abs(len - 1.0) > 1e-8) throw InputError("section profile: direction must be a unit vector");
  xi_ /= len;
  if (opts_.taylor_order < 0 || opts_.taylor_order % 2 || opts_.taylor_order > 6)
    throw InputError("section profile: taylor_order must be 0, 2, 4 or 6");

  const auto form = body_.quadratic_form();
  const auto* rev = std::get_if<Revolution>(&body_.shape().v);
  const bool along_axis = rev && std::abs(std::abs(xi_(rev->axis)) - 1.0) < 1e-14;
  const bool closed = form.has_value() || along_axis;
  switch (opts_.method) {
    case SliceMethod::automatic:
      method_ = closed ? SliceMethod::closed_form : SliceMethod::radial_slice;
      break;
    case SliceMethod::closed_form:
      if (!closed) throw InputError("section profile: no closed form for this body and direction");
      method_ = SliceMethod::closed_form;
      break;
    default:
      method_ = opts_.method;
  }

  if (method_ == SliceMethod::closed_form) {
    if (form) {
      closed_ = Closed::quadric;
      Eigen::LDLT<Mat> ldlt(*form);
      const Vec mx = ldlt.solve(xi_);
      support_ = std::sqrt(xi_.dot(mx));
      center_dir_ = mx / (support_ * support_);
      const double det = ldlt.vectorD().prod();
      central_area_ = ball_volume(dim_ - 1) / (std::sqrt(det) * support_);
    } else {
      closed_ = Closed::revolution_axis;
      support_ = rev->half_length;
      center_dir_ = xi_;
    }
  } else {
    locate_support();
    if (method_ == SliceMethod::radial_slice) {
      frame_ = orthogonal_complement(xi_);
      fiber_ = sphere_grid(dim_ - 1, fiber_resolution(dim_, opts_.tol.sphere_resolution));
      const Vec origin = Vec::Zero(dim_);
      base_radii_.resize(fiber_.size());
      for (std::size_t i = 0; i < fiber_.size(); ++i) base_radii_[i] = slice_radius(origin, static_cast<int>(i));
    }
  }

  for (int k = 0; k <= opts_.taylor_order; k += 2) {
    if (k == 0)
      taylor_.push_back({value(0.0), 0.0, false});
    else
      taylor_.push_back(compute_derivative(k));
  }
}

void SectionProfile::locate_support() {
  // maximize (u, ξ) ρ(u) over the sphere: coarse grid, then pattern search
  auto score = [&](const Vec& u) { return u.dot(xi_) / body_.gauge(u); };
  Vec best = xi_;
  double best_val = score(best);
  const SphereGrid coarse = sphere_grid(dim_, dim_ <= 3 ? 8 : 3);
  for (const Vec& u : coarse.nodes) {
    if (u.dot(xi_) <= 0) continue;
    const double s = score(u);
    if (s > best_val) {
      best_val = s;
      best = u;
    }
  }
  double step = 0.1;
  for (int iter = 0; iter < 20000 && step > 1e-11; ++iter) {
    const Mat tangent = orthogonal_complement(best);
    bool improved = false;
    for (int j = 0; j < tangent.cols() && !improved; ++j) {
      for (double sign : {1.0, -1.0}) {
        Vec cand = best + sign * step * tangent.col(j);
        cand.normalize();
        const double s = score(cand);
        if (s > best_val) {
          best_val = s;
          best = cand;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  support_ = best_val;
  center_dir_ = best / (body_.gauge(best) * best_val);
}

double SectionProfile::slice_radius(const Vec& center, int node) const {
  const Vec u = frame_ * fiber_.nodes[node];
  auto phi = [&](double r) { return body_.boundary_margin(center + r * u); };
  const double f_lo = phi(0.0);
  double hi = center.norm() + 1.25 * body_.outer_radius();
  double f_hi = phi(hi);
  for (int i = 0; i < 60 && f_hi <= 0.0; ++i) f_hi = phi(hi *= 2.0);
  if (!(f_hi > 0.0)) throw ConvergenceError("radial slice: boundary not found along a fiber ray; use the montecarlo_slice method", hi);
  return bracket_root(phi, 0.0, hi, f_lo, f_hi, 0.0);
}

double SectionProfile::radial_slice_value(double t) const {
  const Vec center = t * center_dir_;
  if (body_.boundary_margin(center) >= 0.0) return 0.0;
  const int m = dim_ - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < fiber_.size(); ++i)
    s += fiber_.weights[i] * std::pow(slice_radius(center, static_cast<int>(i)), m);
  return s / m;
}

double SectionProfile::radial_slice_delta(double t) const {
  const int m = dim_ - 1;
  const Vec center = t * center_dir_;
  const bool empty = t >= support_ || body_.boundary_margin(center) >= 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < fiber_.size(); ++i) {
    const double r0 = base_radii_[i];
    if (empty) {
      s -= fiber_.weights[i] * std::pow(r0, m);
    } else {
      const double r = slice_radius(center, static_cast<int>(i));
      s += fiber_.weights[i] * power_difference(r, r0, m);
    }
  }
  return s / m;
}

double SectionProfile::value(double t) const {
  t = std::abs(t);
  if (t >= support_) return 0.0;
  switch (method_) {
    case SliceMethod::montecarlo_slice:
      return montecarlo_value(t).first;
    case SliceMethod::radial_slice:
      return radial_slice_value(t);
    default:
      break;
  }
  const int m = dim_ - 1;
  if (closed_ == Closed::quadric) {
    const double s = t / support_;
    return central_area_ * std::exp(0.5 * m * std::log1p(-s * s));
  }
  const auto& rev = std::get<Revolution>(body_.shape().v);
  return ball_volume(m) * std::pow(std::max(0.0, rev.profile(t)), m);
}

double SectionProfile::delta(double t) const {
  t = std::abs(t);
  if (t == 0.0) return 0.0;
  const int m = dim_ - 1;
  switch (method_) {
    case SliceMethod::montecarlo_slice:
      return value(t) - value(0.0);
    case SliceMethod::radial_slice:
      return radial_slice_delta(t);
    default:
      break;
  }
  if (closed_ == Closed::quadric) {
    if (t >= support_) return -central_area_;
    const double s = t / support_;
    return central_area_ * std::expm1(0.5 * m * std::log1p(-s * s));
  }
  const auto& rev = std::get<Revolution>(body_.shape().v);
  const double kappa = ball_volume(m);
  const double f0m = std::pow(rev.profile(0.0), m);
  if (t >= support_) return -kappa * f0m;
  if (rev.power_delta) return kappa * rev.power_delta(t, m);
  return kappa * (std::pow(std::max(0.0, rev.profile(t)), m) - f0m);
}

double SectionProfile::taylor_remainder(double t, int order) const {
  double r = delta(t);
  for (int j = 2; j <= order; j += 2) r -= derivative(j).value * std::pow(t, j) / factorial(j);
  return r;
}

DerivativeEstimate SectionProfile::derivative(int k) const {
  if (k < 0 || k % 2) throw InputError("section derivative: order must be even and non-negative");
  if (static_cast<std::size_t>(k / 2) < taylor_.size()) return taylor_[k / 2];
  if (k == 0) return {value(0.0), 0.0, false};
  return compute_derivative(k);
}

DerivativeEstimate SectionProfile::compute_derivative(int k) const {
  if (method_ == SliceMethod::montecarlo_slice)
    throw InputError("section derivative: Monte Carlo slices provide values only");
  if (closed_ == Closed::quadric) {
    const int j = k / 2;
    const double alpha = 0.5 * (dim_ - 1);
    const double c = binomial(alpha, j) * (j % 2 ? -1.0 : 1.0) / std::pow(support_, k);
    return {central_area_ * factorial(k) * c, 0.0, false};
  }
  return derivative_at_zero([this](double t) { return delta(t); }, k, opts_.tol, support_);
}

std::pair<double, double> SectionProfile::montecarlo_value(double t) const {
  t = std::abs(t);
  if (t >= support_) return {0.0, 0.0};
  const int m = dim_ - 1;
  const double big = body_.outer_radius();
  if (t >= big) return {0.0, 0.0};
  const double rad = std::sqrt(big * big - t * t);
  const Mat frame = frame_.size() ? frame_ : orthogonal_complement(xi_);
  std::uint64_t bits;
  std::memcpy(&bits, &t, sizeof bits);
  Rng rng(derive_seed(opts_.seed, bits));
  const std::size_t n = std::max<std::size_t>(opts_.mc_samples, 1);
  std::size_t hits = 0;
  Vec g(m);
  for (std::size_t s = 0; s < n; ++s) {
    for (int i = 0; i < m; ++i) g(i) = rng.normal();
    const double r = rad * std::pow(rng.uniform(), 1.0 / m);
    const Vec x = t * xi_ + frame * (r / g.norm() * g);
    if (body_.boundary_margin(x) < 0.0) ++hits;
  }
  const double p = static_cast<double>(hits) / n;
  const double vol = ball_volume(m) * std::pow(rad, m);
  return {vol * p, vol * std::sqrt(p * (1.0 - p) / n)};
}

std::vector<std::pair<double, double>> SectionProfile::samples(int count) const {
  std::vector<std::pair<double, double>> out;
  if (count <= 0) return out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : support_ * i / (count - 1);
    out.emplace_back(t, value(t));
  }
  return out;
}

RegularizedIntegral regularized_power_integral(const std::function<double(double)>& remainder, double q,
                                               int order, double support,
                                               const std::vector<double>& coefficients,
                                               const Tolerances& tol,
                                               const std::vector<double>& coefficient_errors) {
  if (order < 0 || order % 2) throw InputError("regularized integral: order must be even and non-negative");
  if (coefficients.size() < static_cast<std::size_t>(order / 2 + 1))
    throw InputError("regularized integral: missing Taylor coefficients");
  const int lead = order + 2;
  if (!(q > order && q < lead))
    throw InputError("regularized integral: q must lie strictly between the subtracted order and the next one");
  if (!(support > 0)) throw InputError("regularized integral: support must be positive");

  const bool finite = std::isfinite(support);
  const double z0 = finite ? 0.1 * support : 0.1;

  // Leading term handled analytically when t^{lead-1-q} is too close to 1/t.
  double lead_coef = 0.0;
  int rem_order = lead;
  if (lead - q < 0.5) {
    if (coefficients.size() < static_cast<std::size_t>(order / 2 + 2))
      throw InputError("regularized integral: q this close to an even integer needs the next Taylor coefficient");
    lead_coef = coefficients[order / 2 + 1] / factorial(lead);
    rem_order = lead + 2;
  }
  const double beta = 1.0 / (rem_order - q);
  auto near_band = [&](int points) {
    const GaussRule& rule = gauss_legendre_rule(points);
    double s = 0.0;
    for (int i = 0; i < points; ++i) {
      const double u = 0.5 * (rule.x[i] + 1.0);
      const double t = z0 * std::pow(u, beta);
      const double val = remainder(t) - lead_coef * std::pow(t, lead);
      const double jac = z0 * beta * std::pow(u, beta - 1.0);
      s += 0.5 * rule.w[i] * val * std::pow(t, -1.0 - q) * jac;
    }
    return s;
  };
  const double near = near_band(24);
  const double near_check = near_band(16);
  const double near_lead = lead_coef * std::pow(z0, lead - q) / (lead - q);

  auto integrand = [&](double t) { return remainder(t) * std::pow(t, -1.0 - q); };
  Tolerances band = tol;
  band.quad_refinements = std::min(band.quad_refinements, 10);
  double middle;
  if (finite)
    middle = integrate_1d(integrand, z0, support, band, EndpointHint::power_singularity(0.5));
  else
    middle = integrate_1d(integrand, z0, kInfinity, band);

  double tail = 0.0;
  if (finite)
    for (int j = 0; j <= order; j += 2)
      tail -= coefficients[j / 2] / factorial(j) * std::pow(support, j - q) / (q - j);

  RegularizedIntegral out;
  out.value = near + near_lead + middle + tail;
  out.error = std::abs(near - near_check);
  for (std::size_t i = 0; i < coefficient_errors.size(); ++i) {
    const int j = 2 * static_cast<int>(i);
    if (j == lead)
      out.error += coefficient_errors[i] / factorial(j) * std::pow(z0, j - q) / (j - q);
    else
      out.error += coefficient_errors[i] / factorial(j) * std::pow(z0, j - q) / std::abs(q - j);
  }
  const double scale = std::abs(near) + std::abs(near_lead) + std::abs(middle) + std::abs(tail);
  out.noisy = std::abs(near - near_check) > 1e-6 * std::max(scale, 1e-300) || !std::isfinite(out.value);
  return out;
}

double section_value(const StarBody& body, const Vec& xi, double t, SliceMethod method, const Tolerances& tol,
                     std::uint64_t seed) {
  SectionOptions opts;
  opts.tol = tol;
  opts.method = method;
  opts.seed = seed;
  return SectionProfile(body, xi, opts).value(t);
}

DerivativeEstimate section_derivative_at_zero(const StarBody& body, const Vec& xi, int k,
                                              const SectionOptions& opts) {
  if (k < 2 || k % 2) throw InputError("section derivative: order must be a positive even integer");
  return SectionProfile(body, xi, opts).derivative(k);
}

namespace {

struct FractionalPlan {
  int order;
  bool extra;
};

double remainder_from(const SectionProfile& profile, const std::vector<double>& coef, int order, double t) {
  double r = profile.delta(t);
  for (int j = 2; j <= order; j += 2) r -= coef[j / 2] * std::pow(t, j) / factorial(j);
  return r;
}

FractionalPlan plan_fractional(double q) {
  if (!(q > 0) || !std::isfinite(q)) throw InputError("fractional derivative: order must be positive");
  if (q == std::round(q))
    throw InputError("fractional derivative: integer order, use the ordinary derivative at zero");
  const int m = static_cast<int>(std::ceil(q));
  const int order = (m - 1) % 2 ? m - 2 : m - 1;
  if (order + 2 > 6 && order + 2 - q < 0.5) throw InputError("fractional derivative: order too large");
  return {order, order + 2 - q < 0.5};
}

}  // namespace

FractionalDerivative fractional_derivative(const SectionProfile& profile, double q) {
  const FractionalPlan plan = plan_fractional(q);
  std::vector<double> coef, err;
  bool noisy = false;
  for (int j = 0; j <= plan.order + (plan.extra ? 2 : 0); j += 2) {
    const DerivativeEstimate d = profile.derivative(j);
    coef.push_back(d.value);
    err.push_back(d.error);
    noisy = noisy || d.noisy;
  }
  const int order = plan.order;
  const RegularizedIntegral r = regularized_power_integral(
      [&](double t) { return remainder_from(profile, coef, order, t); }, q, order, profile.support(), coef,
      profile.options().tol, err);
  const double g = std::tgamma(-q);
  return {r.value / g, r.error / std::abs(g), noisy || r.noisy};
}

FractionalDerivative fractional_derivative(const std::function<double(double)>& f, double q, double support,
                                           const Tolerances& tol) {
  const FractionalPlan plan = plan_fractional(q);
  const double scale = std::isfinite(support) ? support : 1.0;
  std::vector<double> coef{f(0.0)}, err{0.0};
  bool noisy = false;
  for (int j = 2; j <= plan.order + (plan.extra ? 2 : 0); j += 2) {
    const DerivativeEstimate d = derivative_at_zero([&](double t) { return f(t) - coef[0]; }, j, tol, scale);
    coef.push_back(d.value);
    err.push_back(d.error);
    noisy = noisy || d.noisy;
  }
  const int order = plan.order;
  auto remainder = [&](double t) {
    double r = f(t);
    for (int j = 0; j <= order; j += 2) r -= coef[j / 2] * std::pow(t, j) / factorial(j);
    return r;
  };
  const RegularizedIntegral r = regularized_power_integral(remainder, q, order, support, coef, tol, err);
  const double g = std::tgamma(-q);
  return {r.value / g, r.error / std::abs(g), noisy || r.noisy};
}

RegularizedIntegral regularized_section_integral(const SectionProfile& profile) {
  const int n = profile.body().dim();
  if (n % 2) throw InputError("regularized section integral: dimension must be even");
  std::vector<double> coef, err;
  bool noisy = false;
  for (int j = 0; j <= n - 2; j += 2) {
    const DerivativeEstimate d = profile.derivative(j);
    coef.push_back(d.value);
    err.push_back(d.error);
    noisy = noisy || d.noisy;
  }
  RegularizedIntegral r = regularized_power_integral(
      [&](double t) { return remainder_from(profile, coef, n - 2, t); }, n - 1.0, n - 2, profile.support(), coef,
      profile.options().tol, err);
  r.noisy = r.noisy || noisy;
  return r;
}

RegularizedIntegral regularized_section_integral(const StarBody& body, const Vec& xi, const SectionOptions& opts) {
  SectionOptions o = opts;
  o.taylor_order = std::max(o.taylor_order, body.dim() - 2);
  return regularized_section_integral(SectionProfile(body, xi, o));
}

void write_section_csv(std::ostream& out, const SectionProfile& profile, int count) {
  out << "t,A\n";
  char buf[64];
  for (const auto& [t, a] : profile.samples(count)) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", t, a);
    out << buf;
  }
}

}  // namespace lzero
