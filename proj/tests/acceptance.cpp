// Acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lzero/approximation.hpp"
#include "lzero/embedding.hpp"
#include "lzero/experiments.hpp"
#include "lzero/sections.hpp"
#include "lzero/special.hpp"

using namespace lzero;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Check {
  bool ok = true;
  std::string note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!note.empty()) note += "; ";
      note += what;
    }
  }
};

std::string fmt(const char* f, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Vec random_unit(std::mt19937_64& g, int n) {
  std::normal_distribution<double> N;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = N(g);
  return v.normalized();
}

Mat random_spd(std::mt19937_64& g, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  Eigen::HouseholderQR<Mat> qr(Mat::NullaryExpr(n, n, [&] { return std::normal_distribution<double>()(g); }));
  const Mat Q = qr.householderQ();
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = U(g);
  return Q * d.asDiagonal() * Q.transpose();
}

Check criterion1() {
  Check c;
  const Vec xi3 = Vec(Vec::Unit(3, 0) + Vec::Unit(3, 2)).normalized();
  const double target3 = -2 * M_PI * M_PI;
  const double closed = log_ft(euclidean_ball(3), xi3).value;
  c.require(rel(closed, target3) < 1e-6, "closed-form B3 " + fmt("%.12g", closed));
  TransformOptions radial;
  radial.method = SliceMethod::radial_slice;
  const double generic = log_ft(euclidean_ball(3), xi3, radial).value;
  c.require(rel(generic, target3) < 1e-3, "radial-slice B3 " + fmt("%.12g", generic));
  std::mt19937_64 g(1);
  const double b5 = log_ft(euclidean_ball(5), random_unit(g, 5)).value;
  c.require(rel(b5, -12 * std::pow(M_PI, 3)) < 1e-4, "B5 " + fmt("%.12g", b5));
  c.note += std::string(c.note.empty() ? "" : "; ") + fmt("B3 radial rel err %.2e", rel(generic, target3));
  return c;
}

Check criterion2() {
  Check c;
  const Vec xi = Vec::Unit(4, 1);
  const RegularizedIntegral I = regularized_section_integral(euclidean_ball(4), xi);
  c.require(rel(I.value, 2 * M_PI * M_PI / 3) < 1e-4, "I(B4) " + fmt("%.12g", I.value));
  const double ft = log_ft(euclidean_ball(4), xi).value;
  c.require(rel(-12.0 * I.value, -8 * M_PI * M_PI) < 1e-4, "a4*I");
  c.require(rel(ft, log_ft_ellipsoid_closed_form(xi, 1, 1, xi, 4)) < 1e-4, "log_ft(B4) vs closed form");
  return c;
}

Check criterion3() {
  Check c;
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  double worst = 0.0, worst_radial = 0.0;
  TransformOptions radial;
  radial.method = SliceMethod::radial_slice;
  for (int k = 0; k < 20; ++k) {
    const int n = k % 2 ? 5 : 3;
    const Vec x = random_unit(g, n), theta = random_unit(g, n);
    const double a = U(g), b = U(g);
    const StarBody body = directional_ellipsoid(x, a, b);
    const double want = log_ft_ellipsoid_closed_form(x, a, b, theta, n);
    worst = std::max(worst, rel(log_ft(body, theta).value, want));
    if (k % 4 < 2) worst_radial = std::max(worst_radial, rel(log_ft(body, theta, radial).value, want));
  }
  c.require(worst < 1e-3, fmt("worst rel %.2e", worst));
  c.require(worst_radial < 1e-3, fmt("radial-slice worst rel %.2e", worst_radial));
  const Vec x = Vec(Vec::Unit(3, 0) + 2 * Vec::Unit(3, 1)).normalized();
  const double spot = log_ft(directional_ellipsoid(x, 2, 1), x).value;
  c.require(rel(spot, -M_PI * M_PI / 2) < 1e-3, "spot " + fmt("%.12g", spot));
  c.note += std::string(c.note.empty() ? "" : "; ") + fmt("worst rel %.2e", worst) +
            fmt(", radial-slice %.2e", worst_radial);
  return c;
}

Check criterion4() {
  Check c;
  const double C = embedding_constant(euclidean_ball(3), sphere_grid(3, 16));
  c.require(std::abs(C - 1.0) < 1e-8, "C " + fmt("%.15g", C));
  // 1 + mean ln|(x, ξ)| over the sphere, tilted against the grid poles
  const Vec x = Vec(Vec::Unit(3, 0) + 0.3 * Vec::Unit(3, 1) + 0.7 * Vec::Unit(3, 2)).normalized();
  const SphereGrid fine = sphere_grid(3, 256);
  const double mean = integrate_sphere([&](const Vec& u) { return std::log(std::abs(u.dot(x))); }, fine) /
                      sphere_area(3);
  c.require(std::abs(1.0 + mean) < 1e-3, fmt("quadrature oracle mean %.8g", mean));
  return c;
}

Check criterion5() {
  Check c;
  std::mt19937_64 g(5);
  double worst = 0.0;
  auto mass = [&](const StarBody& b, int res) {
    const EmbeddingReport r = embeds_in_L0(b, sphere_grid(b.dim(), res));
    if (r.verdict != Verdict::embeds) c.require(false, std::string("verdict ") + to_string(r.verdict));
    worst = std::max(worst, std::abs(r.mass - 1.0));
  };
  mass(euclidean_ball(3), 16);
  mass(euclidean_ball(4), 8);
  for (int k = 0; k < 10; ++k) mass(ellipsoid(random_spd(g, 3, 0.5, 2.0)), 16);
  for (int k = 0; k < 5; ++k)
    mass(mult_sum(ellipsoid(random_spd(g, 3, 0.5, 2.0)), ellipsoid(random_spd(g, 3, 0.5, 2.0))), 16);
  c.require(worst <= 1e-3, "mass");
  c.note += std::string(c.note.empty() ? "" : "; ") + fmt("worst |mass-1| %.2e", worst);
  return c;
}

Check criterion6() {
  Check c;
  for (double q : {1.5, 2.0, 3.0, 6.0}) {
    const EmbeddingReport r = embeds_in_L0(lq_ball(3, q), sphere_grid(3, 12));
    c.require(r.verdict == Verdict::embeds && r.min_margin >= -r.tolerance,
              fmt("q=%g ", q) + to_string(r.verdict) + fmt(" min_margin %.3g", r.min_margin));
  }
  return c;
}

Check criterion7() {
  Check c;
  const CounterexampleRecord r = counterexample_value(1.0);
  c.require(std::abs(r.closed_form_value - (-0.838)) < 1e-3, "closed form " + fmt("%.12g", r.closed_form_value));
  c.require(rel(r.numeric_I, r.closed_form_value) < 1e-3, "numeric I " + fmt("%.12g", r.numeric_I));
  c.require(r.verdict == Verdict::fails && r.witness.isApprox(Vec::Unit(4, 3)), "verdict/witness");
  const double v0 = counterexample_closed_form(0.0);
  c.require(std::abs(v0 - 8 * M_PI / 9) < 1e-12 && v0 > 0, "value(0)");
  const double t = find_counterexample_threshold(0.0, 1.0);
  c.require(t > 0 && t < 1, "threshold " + fmt("%.12g", t));
  const double scaled = std::pow(1e8, 0.25) * counterexample_root(1e8);
  c.require(std::abs(scaled - 1.0) < 0.01, "N^(1/4) a_N " + fmt("%.8g", scaled));
  c.note += std::string(c.note.empty() ? "" : "; ") + fmt("N* = %.10g", t);
  return c;
}

Check criterion8() {
  Check c;
  std::mt19937_64 g(8);
  std::vector<Vec> pts;
  for (int k = 0; k < 6; ++k) pts.push_back(random_unit(g, 3));
  double worst = 0.0;
  const auto ball = verify_log_representation(euclidean_ball(3), [](const Vec&) { return 1.0 / (4 * M_PI); }, 1.0,
                                              pts, 5e-3);
  worst = ball.max_residual;
  c.require(ball.pass, "ball residual " + fmt("%.3g", ball.max_residual));
  std::uniform_real_distribution<double> U(0.5, 2.0);
  const SphereGrid grid = sphere_grid(3, 16);
  for (int k = 0; k < 10; ++k) {
    const Vec x = random_unit(g, 3);
    const double a = U(g), b = U(g);
    const StarBody body = directional_ellipsoid(x, a, b);
    auto density = [&](const Vec& th) {
      return -std::pow(2 * M_PI, -3) * log_ft_ellipsoid_closed_form(x, a, b, th, 3);
    };
    const auto r = verify_log_representation(body, density, embedding_constant(body, grid), pts, 5e-3);
    worst = std::max(worst, r.max_residual);
    c.require(r.pass, fmt("ellipsoid %.0f residual ", k) + fmt("%.3g", r.max_residual));
  }
  c.note += std::string(c.note.empty() ? "" : "; ") + fmt("worst residual %.2e", worst);
  return c;
}

Check criterion9() {
  Check c;
  const StarBody body = lq_ball(3, 4.0);
  FitOptions fo;
  fo.grid_resolution = 16;
  fo.check_resolution = 21;
  const std::vector<std::pair<double, double>> schedule = {{0.4, 0.4}, {0.2, 0.2}, {0.1, 0.1}};
  std::vector<double> errors;
  FitResult last;
  for (const auto& [a, sigma] : schedule) {
    last = fit_ellipsoid_product(body, a, 1.0, sigma, fo);
    errors.push_back(last.sup_log_error);
  }
  std::string trace;
  for (double e : errors) trace += fmt("%.4g ", e);
  for (std::size_t i = 1; i < errors.size(); ++i) c.require(errors[i] < errors[i - 1], "not decreasing: " + trace);
  c.require(errors.back() < 0.05, "final error " + trace);
  c.require(std::abs(last.product.weight_sum() - 1.0) < 1e-12, "weight sum");
  const EllipsoidProduct d = dyadicize_weights(last.product, 10);
  double pert = 0.0;
  for (const Vec& u : sphere_grid(3, 21).nodes)
    pert = std::max(pert, std::abs(std::log(product_gauge(d, u) / product_gauge(last.product, u))));
  c.require(pert < 1e-2, fmt("dyadic perturbation %.3g", pert));
  const EmbeddingReport r = embeds_in_L0(product_body(last.product), sphere_grid(3, 8));
  c.require(r.verdict == Verdict::embeds, std::string("product verdict ") + to_string(r.verdict));
  c.note += std::string(c.note.empty() ? "" : "; ") + "sup-log errors " + trace + fmt("parts %.0f", double(last.product.parts.size()));
  return c;
}

Check criterion10() {
  Check c;
  std::mt19937_64 g(10);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const StarBody K = ellipsoid(random_spd(g, 3, 0.5, 2.0));
    const Vec d(Vec::NullaryExpr(3, [&] { return U(g); }));
    const Mat T = d.asDiagonal();
    const StarBody TK = linear_image(T, K);
    const Vec y = 1.7 * random_unit(g, 3);
    const double lhs = log_ft_homogeneous(TK, y).value;
    const double rhs = log_ft_homogeneous(K, T.inverse().transpose() * y).value / std::abs(T.determinant());
    worst = std::max(worst, rel(lhs, rhs));
  }
  c.require(worst < 1e-3, fmt("worst rel %.2e", worst));
  c.note += std::string(c.note.empty() ? "" : "; ") + fmt("worst rel %.2e", worst);
  return c;
}

Check criterion11() {
  Check c;
  const double p = 0.5;
  const int n = 3;
  const double oracle = std::pow(2.0, n - p) * std::pow(M_PI, n / 2.0) * std::tgamma((n - p) / 2) / std::tgamma(p / 2);
  const double got = neg_power_ft(euclidean_ball(3), Vec::Unit(3, 0), p).value;
  c.require(rel(got, oracle) < 1e-3, "ball " + fmt("%.10g", got) + fmt(" vs %.10g", oracle));
  const StarBody body = counterexample_body(1.0);
  const SphereGrid grid = sphere_grid(4, 4);
  bool failed = false;
  std::string trace;
  for (double pp : {0.1, 0.25, 0.5}) {
    const NegPReport r = neg_p_embed_test(body, pp, grid);
    trace += fmt("p=%g ", pp) + to_string(r.verdict) + fmt(" (min %.4g) ", r.min_value);
    if (r.verdict == Verdict::fails) {
      failed = true;
      break;
    }
  }
  c.require(failed, "counterexample never fails: " + trace);
  if (failed) c.note += std::string(c.note.empty() ? "" : "; ") + trace;
  return c;
}

Check criterion12() {
  Check c;
  const CauchyMcResult r = cauchy_log_moment_mc(1.0, {1.0}, 1'000'000, 12);
  const double dev = std::abs(r.estimate - 0.5 * std::log(2.0));
  c.require(dev < 3 * r.stderr_, fmt("estimate %.6f", r.estimate) + fmt(" stderr %.2e", r.stderr_));
  const double q = cauchy_log_abs_mean();
  c.require(std::abs(q) < 1e-6, fmt("quadrature %.3e", q));
  c.note += std::string(c.note.empty() ? "" : "; ") + fmt("|dev|/stderr %.2f", dev / r.stderr_);
  return c;
}

Check criterion13() {
  Check c;
  const SectionProfile prof(euclidean_ball(3), Vec::Unit(3, 2));
  const FractionalDerivative d = fractional_derivative(prof, 1.5);
  c.require(rel(d.value, -2 * std::sqrt(M_PI)) < 1e-4, "D^1.5 " + fmt("%.12g", d.value));
  const double second = prof.derivative(2).value;
  const FractionalDerivative near = fractional_derivative(prof, 1.999);
  c.require(rel(near.value, second) < 1e-2, "q->2 " + fmt("%.8g", near.value) + fmt(" vs %.8g", second));
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"ball transform, odd n", criterion1},
      {"ball transform, even n", criterion2},
      {"ellipsoid closed-form agreement", criterion3},
      {"embedding constant", criterion4},
      {"probability measure", criterion5},
      {"three-dimensional bodies embed", criterion6},
      {"counterexample", criterion7},
      {"representation identity", criterion8},
      {"approximation pipeline", criterion9},
      {"linear covariance", criterion10},
      {"L_{-p} test", criterion11},
      {"Cauchy Monte Carlo", criterion12},
      {"fractional derivative", criterion13},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s [%.1fs] %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, secs, c.note.c_str());
    std::fflush(stdout);
    failures += !c.ok;
  }
  return failures ? 1 : 0;
}
