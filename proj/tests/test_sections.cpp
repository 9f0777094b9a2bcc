#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lzero/bodies.hpp"
#include "lzero/body_io.hpp"
#include "lzero/errors.hpp"
#include "lzero/experiments.hpp"
#include "lzero/quadrature.hpp"
#include "lzero/sections.hpp"

using namespace lzero;
using doctest::Approx;

namespace {

Vec unit(int n, int i) { return Vec::Unit(n, i); }

Vec diag_dir(int n) { return Vec(Vec::Ones(n)).normalized(); }

}  // namespace

TEST_CASE("central sections of the ball") {
  const StarBody b = euclidean_ball(3);
  for (SliceMethod m : {SliceMethod::automatic, SliceMethod::closed_form, SliceMethod::radial_slice}) {
    CAPTURE(to_string(m));
    for (double t : {0.0, 0.3, 0.75, 0.99})
      CHECK(section_value(b, diag_dir(3), t, m) == Approx(M_PI * (1 - t * t)).epsilon(1e-8));
  }
  CHECK(section_value(b, unit(3, 0), 1.2) == 0.0);
  CHECK(section_value(euclidean_ball(5), unit(5, 2), 0.5) == Approx(M_PI * M_PI / 2 * 0.75 * 0.75).epsilon(1e-8));
}

TEST_CASE("sections of the counterexample along its axis") {
  const double N = 1.0;
  const double aN = counterexample_root(N);
  const StarBody c = counterexample_body(N);
  const SectionProfile prof(c, unit(4, 3));
  CHECK(prof.support() == Approx(aN).epsilon(1e-12));
  for (double t : {0.0, 0.2, 0.5, 0.7}) {
    const double f3 = 1 - t * t - N * std::pow(t, 4);
    CHECK(prof.value(t) == Approx(4 * M_PI / 3 * f3).epsilon(1e-10));
  }
  CHECK(prof.value(aN + 0.01) == 0.0);
}

TEST_CASE("sections vanish beyond the support") {
  const StarBody k = lq_ball(3, 4.0);
  const SectionProfile prof(k, diag_dir(3));
  CHECK(prof.support() == Approx(std::pow(3.0, 0.25)).epsilon(1e-8));
  CHECK(prof.value(prof.support() * 1.001) == 0.0);
  CHECK(prof.value(prof.support() * 0.9) > 0.0);
}

TEST_CASE("even derivatives at zero") {
  CHECK(section_derivative_at_zero(euclidean_ball(3), diag_dir(3), 2).value == Approx(-2 * M_PI).epsilon(1e-8));

  const double a = 1.7, b = 0.6;
  const Vec xi = diag_dir(3);
  const StarBody e = directional_ellipsoid(xi, a, b);
  CHECK(section_derivative_at_zero(e, xi, 2).value == Approx(-2 * M_PI * b * b / (a * a)).epsilon(1e-8));
  SectionOptions radial;
  radial.method = SliceMethod::radial_slice;
  CHECK(section_derivative_at_zero(e, xi, 2, radial).value ==
        Approx(-2 * M_PI * b * b / (a * a)).epsilon(1e-5));

  CHECK(section_derivative_at_zero(euclidean_ball(5), unit(5, 0), 4).value ==
        Approx(12 * M_PI * M_PI).epsilon(1e-6));
  CHECK_THROWS_AS(section_derivative_at_zero(euclidean_ball(3), xi, 3), InputError);
}

TEST_CASE("fractional derivatives") {
  const auto constant = [](double) { return 1.0; };
  CHECK(std::abs(fractional_derivative(constant, 0.5, kInfinity).value) < 1e-10);

  const SectionProfile ball(euclidean_ball(3), unit(3, 2));
  CHECK(fractional_derivative(ball, 1.5).value == Approx(-2 * std::sqrt(M_PI)).epsilon(1e-6));
  const double second = ball.derivative(2).value;
  CHECK(fractional_derivative(ball, 1.999).value == Approx(second).epsilon(1e-2));
  CHECK_THROWS_AS(fractional_derivative(ball, 2.0), InputError);

  const auto gauss = [](double t) { return std::exp(-t * t); };
  const auto direct = fractional_derivative(gauss, 0.5, kInfinity);
  CHECK(direct.value == Approx(std::tgamma(-0.25) / (2 * std::tgamma(-0.5))).epsilon(1e-6));
}

TEST_CASE("regularized section integral") {
  const RegularizedIntegral ball = regularized_section_integral(euclidean_ball(4), unit(4, 1));
  CHECK(ball.value == Approx(2 * M_PI * M_PI / 3).epsilon(1e-7));
  for (double N : {0.0, 1.0, 3.0}) {
    CAPTURE(N);
    const RegularizedIntegral ce = regularized_section_integral(counterexample_body(N), unit(4, 3));
    CHECK(ce.value == Approx(counterexample_closed_form(N)).epsilon(1e-7));
  }
  CHECK(counterexample_closed_form(1.0) == Approx(-0.838548622).epsilon(1e-8));
  CHECK_THROWS_AS(regularized_section_integral(euclidean_ball(3), unit(3, 0)), InputError);
}

TEST_CASE("section functions are even") {
  const StarBody k = p_sum(0.5, lq_ball(3, 3.0), euclidean_ball(3));
  const SectionProfile prof(k, Vec(Vec::LinSpaced(3, 0.2, 1.0)).normalized());
  for (double t : {0.1, 0.4, 0.6}) CHECK(prof.value(-t) == Approx(prof.value(t)).epsilon(1e-12));
}

TEST_CASE("square roots of sections of convex bodies are concave") {
  const SectionProfile prof(lq_ball(3, 4.0), diag_dir(3));
  const auto s = prof.samples(41);
  for (std::size_t i = 1; i + 1 < s.size() - 1; ++i) {
    const double mid = std::sqrt(s[i].second);
    const double avg = 0.5 * (std::sqrt(s[i - 1].second) + std::sqrt(s[i + 1].second));
    CHECK(mid >= avg - 1e-7);
  }
}

TEST_CASE("radial slices agree with Monte Carlo") {
  Mat m(3, 3);
  m << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.7;
  const StarBody e = ellipsoid(m);
  SectionOptions opts;
  opts.method = SliceMethod::radial_slice;
  opts.mc_samples = 100'000;
  opts.seed = 17;
  const SectionProfile prof(e, diag_dir(3), opts);
  const SectionProfile exact(e, diag_dir(3));
  REQUIRE(exact.method() == SliceMethod::closed_form);
  for (double frac : {0.0, 0.4, 0.8}) {
    const double t = frac * prof.support();
    const auto [mc, se] = prof.montecarlo_value(t);
    CHECK(std::abs(mc - prof.value(t)) <= 3 * se);
    CHECK(prof.value(t) == Approx(exact.value(t)).epsilon(1e-6));
  }
}

TEST_CASE("section CSV") {
  const SectionProfile prof(euclidean_ball(3), unit(3, 0));
  std::ostringstream out;
  write_section_csv(out, prof, 5);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,A");
  std::getline(in, line);
  const double a0 = std::stod(line.substr(line.find(',') + 1));
  CHECK(a0 == Approx(M_PI).epsilon(1e-10));
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
}
