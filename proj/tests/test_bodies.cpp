#include <doctest.h>

#include <cmath>

#include "lzero/bodies.hpp"
#include "lzero/body_io.hpp"
#include "lzero/errors.hpp"
#include "lzero/experiments.hpp"
#include "lzero/random.hpp"

using namespace lzero;
using doctest::Approx;

namespace {

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

Vec random_vec(Rng& rng, int n) {
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("gauges of basic bodies") {
  CHECK(euclidean_ball(3).gauge(v3(3, 4, 0)) == Approx(5.0).epsilon(1e-15));
  CHECK(lq_ball(3, 1.0).gauge(v3(1, 1, 1)) == Approx(3.0).epsilon(1e-14));
  CHECK(lq_ball(3, 4.0).gauge(v3(1, -1, 0)) == Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
  CHECK(euclidean_ball(4).gauge(Vec::Zero(4)) == 0.0);

  const Vec x0 = v3(1, 2, 2) / 3.0;
  const StarBody e = directional_ellipsoid(x0, 2.0, 0.5);
  CHECK(e.gauge(x0) == Approx(0.5).epsilon(1e-14));
  const Vec perp = v3(2, -1, 0).normalized();
  CHECK(e.gauge(perp) == Approx(2.0).epsilon(1e-14));
  CHECK(e.radial(x0) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("ellipsoid matrix form") {
  Mat m = Mat::Zero(3, 3);
  m.diagonal() << 1.0, 4.0, 9.0;
  const StarBody e = ellipsoid(m);
  CHECK(e.gauge(v3(0, 1, 0)) == Approx(2.0).epsilon(1e-14));
  CHECK(e.gauge(v3(0, 0, 1)) == Approx(3.0).epsilon(1e-14));
  REQUIRE(e.quadratic_form().has_value());
  CHECK((*e.quadratic_form() - m).norm() < 1e-14);
  CHECK(e.inner_radius() <= 1.0 / 3.0 + 1e-12);
  CHECK(e.outer_radius() >= 1.0 - 1e-12);
}

TEST_CASE("p-sums and the multiplicative sum") {
  const StarBody b = euclidean_ball(3);
  const Vec x = v3(0.3, -1.2, 0.7);
  CHECK(p_sum(1.0, b, b).gauge(x) == Approx(2 * x.norm()).epsilon(1e-14));
  const StarBody k = lq_ball(3, 3.0);
  for (double p : {0.5, -0.5, 1.0})
    CHECK(p_sum(p, k, k).gauge(x) == Approx(std::pow(2.0, 1 / p) * k.gauge(x)).epsilon(1e-13));
  const StarBody l = lq_ball(3, 1.5);
  CHECK(mult_sum(k, l).gauge(x) == Approx(std::sqrt(k.gauge(x) * l.gauge(x))).epsilon(1e-14));
  CHECK(log_blend({{k, 0.5}, {l, 0.5}}).gauge(x) == Approx(mult_sum(k, l).gauge(x)).epsilon(1e-14));
  CHECK_THROWS_AS(p_sum(0.0, k, l), InputError);
  CHECK_THROWS_AS(p_sum(2.0, k, l), InputError);
  CHECK_THROWS_AS(log_blend({{k, 0.5}, {l, 0.6}}), InputError);
  CHECK_THROWS_AS(mult_sum(k, euclidean_ball(4)), InputError);
}

TEST_CASE("linear images") {
  const double a = 2.0, b = 0.5;
  Mat t = Mat::Zero(3, 3);
  t.diagonal() << 1 / a, 1 / b, 1 / b;
  const StarBody img = linear_image(t, euclidean_ball(3));
  const StarBody de = directional_ellipsoid(v3(1, 0, 0), a, b);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_vec(rng, 3);
    CHECK(img.gauge(x) == Approx(de.gauge(x)).epsilon(1e-13));
  }
  const StarBody k = lq_ball(3, 4.0);
  const StarBody same = linear_image(Mat::Identity(3, 3), k);
  const Vec x = v3(0.1, 0.9, -0.4);
  CHECK(same.gauge(x) == Approx(k.gauge(x)).epsilon(1e-15));
  Mat singular = Mat::Identity(3, 3);
  singular(2, 2) = 1e-14;
  CHECK_THROWS_AS(linear_image(singular, k), InputError);
}

TEST_CASE("scaling and radial distance") {
  const SphereGrid g = sphere_grid(3, 8);
  const StarBody b = euclidean_ball(3);
  CHECK(radial_distance(b, scaled(b, 2.0), g) == Approx(1.0).epsilon(1e-14));
  const StarBody k = lq_ball(3, 4.0);
  CHECK(radial_distance(k, k, g) == 0.0);
  CHECK(scaled(k, 3.0).gauge(v3(1, 1, 0)) == Approx(k.gauge(v3(1, 1, 0)) / 3).epsilon(1e-14));
}

TEST_CASE("bodies of revolution") {
  const StarBody s = sphere_revolution_body(4);
  const StarBody b = euclidean_ball(4);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_vec(rng, 4);
    CHECK(s.gauge(x) == Approx(b.gauge(x)).epsilon(1e-10));
  }

  for (double N : {0.0, 1.0, 5.0}) {
    const StarBody c = counterexample_body(N);
    const double aN = counterexample_root(N);
    CHECK(c.gauge(Vec::Unit(4, 3)) == Approx(1 / aN).epsilon(1e-12));
    Vec y = Vec::Zero(4);
    y << 0.3, -0.4, 1.2, 0.0;
    CHECK(c.gauge(y) == Approx(y.norm()).epsilon(1e-12));
  }
  CHECK(counterexample_root(1.0) == Approx(std::sqrt((std::sqrt(5.0) - 1) / 2)).epsilon(1e-14));
}

TEST_CASE("gauges are even and homogeneous") {
  Rng rng(3);
  const std::vector<StarBody> bodies{lq_ball(3, 1.5), directional_ellipsoid(v3(0, 0.6, 0.8), 1.3, 0.4),
                                     p_sum(0.5, euclidean_ball(3), lq_ball(3, 4.0)),
                                     mult_sum(lq_ball(3, 1.0), euclidean_ball(3))};
  for (const StarBody& k : bodies) {
    for (int i = 0; i < 10; ++i) {
      const Vec x = random_vec(rng, 3);
      CHECK(k.gauge(-x) == Approx(k.gauge(x)).epsilon(1e-14));
      CHECK(k.gauge(2.5 * x) == Approx(2.5 * k.gauge(x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("convex bodies satisfy the triangle inequality") {
  Rng rng(8);
  const std::vector<StarBody> bodies{lq_ball(3, 1.5), lq_ball(3, 4.0), lq_ball(3, 2.5),
                                     p_sum(1.0, lq_ball(3, 3.0), euclidean_ball(3))};
  for (const StarBody& k : bodies) {
    for (int i = 0; i < 50; ++i) {
      const Vec x = random_vec(rng, 3), y = random_vec(rng, 3);
      CHECK(k.gauge(x + y) <= k.gauge(x) + k.gauge(y) + 1e-12);
    }
  }
  const StarBody c = counterexample_body(1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec x = random_vec(rng, 4), y = random_vec(rng, 4);
    CHECK(c.gauge(x + y) <= c.gauge(x) + c.gauge(y) + 1e-9);
  }
}

TEST_CASE("boundary margin sign") {
  const StarBody k = lq_ball(3, 4.0);
  CHECK(k.boundary_margin(v3(0.5, 0, 0)) < 0);
  CHECK(k.boundary_margin(v3(2, 0, 0)) > 0);
  CHECK(std::abs(k.boundary_margin(v3(1, 0, 0))) < 1e-12);
}

TEST_CASE("body spec round trip") {
  const std::vector<std::string> specs{
      R"({"kind":"ball","dim":3})",
      R"({"kind":"lq","dim":4,"q":4})",
      R"({"kind":"directional_ellipsoid","axis":[0,0.6,0.8],"a":1.5,"b":0.25})",
      R"({"kind":"ellipsoid","matrix":[[2,0.1,0],[0.1,1,0],[0,0,3]]})",
      R"({"kind":"linear_image","T":[[1,2,0],[0,1,0],[0,0,1]],"base":{"kind":"lq","dim":3,"q":3}})",
      R"({"kind":"mult_sum","left":{"kind":"ball","dim":3},"right":{"kind":"lq","dim":3,"q":1}})",
      R"({"kind":"p_sum","p":0.5,"left":{"kind":"ball","dim":3},"right":{"kind":"lq","dim":3,"q":1}})",
      R"({"kind":"log_blend","parts":[{"body":{"kind":"ball","dim":3},"weight":0.25},
          {"body":{"kind":"lq","dim":3,"q":3},"weight":0.75}]})",
      R"({"kind":"revolution","profile":"counterexample","dim":4,"N":0.5})",
      R"({"kind":"revolution","profile":"sphere","dim":3})",
      R"([{"xi":[1,0,0],"a":1,"b":2,"weight":0.5},{"xi":[0,1,0],"a":0.5,"b":1,"weight":0.5}])"};
  Rng rng(21);
  for (const std::string& text : specs) {
    CAPTURE(text);
    const StarBody k = parse_body_text(text);
    const StarBody again = parse_body(serialize_body(k));
    CHECK(serialize_body(again) == serialize_body(k));
    for (int i = 0; i < 5; ++i) {
      const Vec x = random_vec(rng, k.dim());
      CHECK(again.gauge(x) == Approx(k.gauge(x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("malformed body specs are input errors") {
  const std::vector<std::string> bad{R"({"kind":"ball"})",
                                     R"({"kind":"cube","dim":3})",
                                     R"({"kind":"lq","dim":3,"q":"four"})",
                                     R"({"kind":"lq","dim":3,"q":0})",
                                     R"({"kind":"directional_ellipsoid","axis":[0,0,0],"a":1,"b":1})",
                                     R"({"kind":"revolution","profile":"counterexample","dim":3,"N":1})",
                                     R"({"kind":"mult_sum","left":{"kind":"ball","dim":3}})",
                                     R"({"kind":"ball","dim":3)",
                                     R"([])"};
  for (const std::string& text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_body_text(text), InputError);
  }
  try {
    parse_body_text(R"({"kind":"mult_sum","left":{"kind":"ball","dim":3},"right":{"kind":"lq","dim":3}})");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("/right") != std::string::npos);
  }
}

TEST_CASE("tabulated bodies") {
  const SphereGrid g = sphere_grid(3, 10);
  std::vector<double> radii(g.size(), 2.0);
  const StarBody t = tabulated_body(g, radii);
  CHECK(t.gauge(v3(0.3, 0.4, 1.0)) == Approx(v3(0.3, 0.4, 1.0).norm() / 2).epsilon(1e-9));
  radii[0] = -1.0;
  CHECK_THROWS_AS(tabulated_body(g, radii), InputError);
}
