#include "lzero/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lzero/errors.hpp"
#include "lzero/roots.hpp"

namespace lzero {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const StarBody& k, const StarBody& l, const char* who) {
  if (k.dim() != l.dim())
    throw InputError(std::string(who) + ": dimension mismatch (" + std::to_string(k.dim()) + " vs " +
                     std::to_string(l.dim()) + ")");
}

double lq_norm(const Vec& x, double q) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)) / m, q);
  return m * std::pow(s, 1.0 / q);
}

double revolution_margin(const Revolution& r, const Vec& x) {
  const double h = x(r.axis);
  const double perp = std::sqrt(std::max(0.0, x.squaredNorm() - h * h));
  if (std::abs(h) >= r.half_length) return perp + (std::abs(h) - r.half_length);
  return perp - r.profile(h);
}

// Gauge of a body of revolution: find the boundary crossing along the ray.
double revolution_gauge(const Revolution& r, const Vec& x, double inner, double outer) {
  const double len = x.norm();
  if (len == 0.0) return 0.0;
  const Vec u = x / len;
  auto phi = [&](double rad) { return revolution_margin(r, rad * u); };
  double lo = 0.5 * inner, hi = 1.5 * outer;
  double f_lo = phi(lo), f_hi = phi(hi);
  for (int i = 0; i < 60 && f_lo >= 0.0; ++i) f_lo = phi(lo *= 0.5);
  for (int i = 0; i < 60 && f_hi <= 0.0; ++i) f_hi = phi(hi *= 2.0);
  const double rad = bracket_root(phi, lo, hi, f_lo, f_hi, 0.0);
  return len / rad;
}

double tabulated_radial(const Tabulated& t, const Vec& u) {
  const int n = static_cast<int>(u.size());
  // n nearest nodes by angle, inverse-square-angle weights.
  std::vector<std::pair<double, std::size_t>> best;
  best.reserve(n + 1);
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    const double c = std::clamp(t.grid.nodes[i].dot(u), -1.0, 1.0);
    const double ang = std::acos(c);
    if (ang < 1e-12) return t.radii[i];
    if (static_cast<int>(best.size()) < n || ang < best.back().first) {
      best.emplace_back(ang, i);
      std::sort(best.begin(), best.end());
      if (static_cast<int>(best.size()) > n) best.pop_back();
    }
  }
  if (!t.interpolate)
    throw InputError("tabulated body queried off-grid with interpolation disabled");
  double num = 0.0, den = 0.0;
  for (auto [ang, i] : best) {
    const double w = 1.0 / (ang * ang);
    num += w * t.radii[i];
    den += w;
  }
  return num / den;
}

}  // namespace

double StarBody::gauge(const Vec& x) const {
  if (x.size() != dim_)
    throw InputError("gauge: vector of size " + std::to_string(x.size()) + " for body of dimension " +
                     std::to_string(dim_));
  if (x.isZero(0.0)) return 0.0;
  return std::visit(
      Overloaded{
          [&](const EuclideanBall&) { return x.norm(); },
          [&](const LqBall& b) { return lq_norm(x, b.q); },
          [&](const DirectionalEllipsoid& e) {
            const double t = e.axis.dot(x);
            const double perp2 = std::max(0.0, x.squaredNorm() - t * t);
            return std::sqrt(t * t / (e.a * e.a) + perp2 / (e.b * e.b));
          },
          [&](const Ellipsoid& e) { return std::sqrt(std::max(0.0, x.dot(e.form * x))); },
          [&](const LinearImage& l) { return l.base.gauge(l.transform * x); },
          [&](const MultSum& m) { return std::sqrt(m.left.gauge(x)) * std::sqrt(m.right.gauge(x)); },
          [&](const LogBlend& b) {
            double s = 0.0;
            for (const auto& [body, w] : b.parts) s += w * std::log(body.gauge(x));
            return std::exp(s);
          },
          [&](const PSum& s) {
            const double gl = s.left.gauge(x), gr = s.right.gauge(x);
            // Factor out the term that keeps the ratio below one.
            const double lead = s.p > 0 ? std::max(gl, gr) : std::min(gl, gr);
            const double other = s.p > 0 ? std::min(gl, gr) : std::max(gl, gr);
            return lead * std::pow(1.0 + std::pow(other / lead, s.p), 1.0 / s.p);
          },
          [&](const Revolution& r) { return revolution_gauge(r, x, inner_, outer_); },
          [&](const Tabulated& t) {
            const double len = x.norm();
            return len / tabulated_radial(t, x / len);
          },
      },
      shape_->v);
}

double StarBody::radial(const Vec& u) const { return 1.0 / gauge(u); }

double StarBody::boundary_margin(const Vec& x) const {
  if (const auto* r = std::get_if<Revolution>(&shape_->v)) return revolution_margin(*r, x);
  return gauge(x) - 1.0;
}

std::optional<Mat> StarBody::quadratic_form() const {
  return std::visit(
      Overloaded{
          [&](const EuclideanBall&) -> std::optional<Mat> { return Mat::Identity(dim_, dim_); },
          [&](const LqBall& b) -> std::optional<Mat> {
            if (b.q == 2.0) return Mat::Identity(dim_, dim_);
            return std::nullopt;
          },
          [&](const DirectionalEllipsoid& e) -> std::optional<Mat> {
            Mat m = Mat::Identity(dim_, dim_) / (e.b * e.b);
            m += (1.0 / (e.a * e.a) - 1.0 / (e.b * e.b)) * e.axis * e.axis.transpose();
            return m;
          },
          [&](const Ellipsoid& e) -> std::optional<Mat> { return e.form; },
          [&](const LinearImage& l) -> std::optional<Mat> {
            auto base = l.base.quadratic_form();
            if (!base) return std::nullopt;
            return Mat(l.transform.transpose() * (*base) * l.transform);
          },
          [&](const auto&) -> std::optional<Mat> { return std::nullopt; },
      },
      shape_->v);
}

std::string StarBody::kind() const {
  return std::visit(Overloaded{
                        [](const EuclideanBall&) { return std::string("ball"); },
                        [](const LqBall&) { return std::string("lq"); },
                        [](const DirectionalEllipsoid&) { return std::string("directional_ellipsoid"); },
                        [](const Ellipsoid&) { return std::string("ellipsoid"); },
                        [](const LinearImage&) { return std::string("linear_image"); },
                        [](const MultSum&) { return std::string("mult_sum"); },
                        [](const LogBlend&) { return std::string("log_blend"); },
                        [](const PSum&) { return std::string("p_sum"); },
                        [](const Revolution&) { return std::string("revolution"); },
                        [](const Tabulated&) { return std::string("tabulated"); },
                    },
                    shape_->v);
}

StarBody::StarBody(int dim, std::shared_ptr<const Shape> shape) : dim_(dim), shape_(std::move(shape)) {
  if (dim_ < 2) throw InputError("star body: dimension must be at least 2");
  if (auto m = quadratic_form()) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(*m);
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0)) throw InputError("ellipsoid: form must be positive definite");
    inner_ = 1.0 / std::sqrt(hi);
    outer_ = 1.0 / std::sqrt(lo);
    return;
  }
  if (const auto* r = std::get_if<Revolution>(&shape_->v)) {
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    const int samples = 2001;
    for (int i = 0; i < samples; ++i) {
      const double t = -r->half_length + 2.0 * r->half_length * i / (samples - 1);
      const double f = std::max(0.0, r->profile(t));
      const double rad = std::hypot(f, t);
      lo = std::min(lo, rad);
      hi = std::max(hi, rad);
    }
    inner_ = lo;
    outer_ = hi;
    return;
  }
  // Generic: sample radial values; the gauge is well defined without radii here.
  const SphereGrid g = sphere_grid(dim_, dim_ <= 3 ? 12 : (dim_ <= 5 ? 5 : 3));
  double lo = std::numeric_limits<double>::max(), hi = 0.0;
  for (const Vec& u : g.nodes) {
    const double rho = radial(u);
    if (!(rho > 0) || !std::isfinite(rho)) throw InputError("star body: non-positive radial value");
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
  }
  inner_ = 0.5 * lo;
  outer_ = 2.0 * hi;
}

double gauge(const StarBody& body, const Vec& x) { return body.gauge(x); }

namespace {
StarBody make(int n, Shape s) { return StarBody(n, std::make_shared<const Shape>(std::move(s))); }
}  // namespace

StarBody euclidean_ball(int n) { return make(n, {EuclideanBall{}}); }

StarBody lq_ball(int n, double q) {
  if (!(q > 0) || !std::isfinite(q)) throw InputError("lq_ball: q must be positive");
  return make(n, {LqBall{q}});
}

StarBody directional_ellipsoid(const Vec& axis, double a, double b) {
  if (!(a > 0) || !(b > 0)) throw InputError("directional_ellipsoid: a and b must be positive");
  const double len = axis.norm();
  if (!(len > 0)) throw InputError("directional_ellipsoid: zero axis");
  return make(static_cast<int>(axis.size()), {DirectionalEllipsoid{axis / len, a, b}});
}

StarBody ellipsoid(const Mat& form) {
  if (form.rows() != form.cols()) throw InputError("ellipsoid: form must be square");
  if ((form - form.transpose()).norm() > 1e-12 * form.norm())
    throw InputError("ellipsoid: form must be symmetric");
  return make(static_cast<int>(form.rows()), {Ellipsoid{form}});
}

StarBody mult_sum(const StarBody& k, const StarBody& l) {
  require_dim(k, l, "mult_sum");
  return make(k.dim(), {MultSum{k, l}});
}

StarBody p_sum(double p, const StarBody& k, const StarBody& l) {
  require_dim(k, l, "p_sum");
  if (p == 0.0) throw InputError("p_sum: p = 0 is the multiplicative sum, use mult_sum");
  if (!(p >= -1.0 && p <= 1.0)) throw InputError("p_sum: p must lie in [-1, 1]");
  return make(k.dim(), {PSum{p, k, l}});
}

StarBody linear_image(const Mat& t, const StarBody& k) {
  if (t.rows() != k.dim() || t.cols() != k.dim())
    throw InputError("linear_image: matrix size does not match body dimension");
  Eigen::JacobiSVD<Mat> svd(t);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0) || s(0) / smin > 1e12) throw InputError("linear_image: singular transform");
  return make(k.dim(), {LinearImage{t, k}});
}

StarBody scaled(const StarBody& k, double c) {
  if (!(c > 0)) throw InputError("scaled: factor must be positive");
  return linear_image(Mat::Identity(k.dim(), k.dim()) / c, k);
}

StarBody log_blend(std::vector<std::pair<StarBody, double>> parts) {
  if (parts.empty()) throw InputError("log_blend: no parts");
  double total = 0.0;
  for (const auto& [body, w] : parts) {
    if (!(w > 0)) throw InputError("log_blend: weights must be positive");
    if (body.dim() != parts.front().first.dim()) throw InputError("log_blend: dimension mismatch");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("log_blend: weights must sum to 1");
  const int n = parts.front().first.dim();
  return make(n, {LogBlend{std::move(parts)}});
}

StarBody revolution_body(std::function<double(double)> profile, int n, double half_length, int axis,
                         ProfileInfo info, std::function<double(double, int)> power_delta) {
  if (n < 2) throw InputError("revolution_body: dimension must be at least 2");
  if (axis < 0) axis = n - 1;
  if (axis >= n) throw InputError("revolution_body: axis out of range");
  if (!(half_length > 0)) throw InputError("revolution_body: half length must be positive");
  double peak = 0.0;
  const int samples = 257;
  for (int i = 1; i < samples - 1; ++i) {
    const double t = -half_length + 2.0 * half_length * i / (samples - 1);
    const double f = profile(t), g = profile(-t);
    if (!(f > 0)) throw InputError("revolution_body: profile not positive inside the interval");
    if (std::abs(f - g) > 1e-12 * std::max(1.0, std::abs(f)))
      throw InputError("revolution_body: profile not even");
    peak = std::max(peak, f);
  }
  if (std::abs(profile(half_length)) > 1e-3 * peak || std::abs(profile(-half_length)) > 1e-3 * peak)
    throw InputError("revolution_body: profile must vanish at the ends");
  return make(n, {Revolution{std::move(profile), half_length, axis, std::move(info), std::move(power_delta)}});
}

StarBody tabulated_body(SphereGrid grid, std::vector<double> radii, bool interpolate) {
  if (grid.size() != radii.size()) throw InputError("tabulated_body: radii count differs from grid size");
  for (double r : radii)
    if (!(r > 0) || !std::isfinite(r)) throw InputError("tabulated_body: radii must be positive");
  const int n = grid.dim;
  return make(n, {Tabulated{std::move(grid), std::move(radii), interpolate}});
}

double radial_distance(const StarBody& k, const StarBody& l, const SphereGrid& grid) {
  require_dim(k, l, "radial_distance");
  double worst = 0.0;
  for (const Vec& u : grid.nodes) worst = std::max(worst, std::abs(k.radial(u) - l.radial(u)));
  return worst;
}

}  // namespace lzero
