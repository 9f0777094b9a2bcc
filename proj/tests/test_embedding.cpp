#include <doctest.h>

#include <cmath>

#include "lzero/bodies.hpp"
#include "lzero/embedding.hpp"
#include "lzero/errors.hpp"
#include "lzero/experiments.hpp"
#include "lzero/special.hpp"

using namespace lzero;
using doctest::Approx;

namespace {

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

}  // namespace

TEST_CASE("transform of ln|x| for Euclidean balls") {
  CHECK(log_ft(euclidean_ball(3), v3(0, 0.6, 0.8)).value == Approx(-2 * M_PI * M_PI).epsilon(1e-8));
  CHECK(log_ft(euclidean_ball(4), Vec::Unit(4, 1)).value == Approx(-8 * M_PI * M_PI).epsilon(1e-7));
  CHECK(log_ft(euclidean_ball(5), Vec(Vec::Ones(5)).normalized()).value ==
        Approx(-12 * std::pow(M_PI, 3)).epsilon(1e-6));
  const Vec y = 2.0 * v3(0, 0, 1);
  CHECK(log_ft_homogeneous(euclidean_ball(3), y).value == Approx(-2 * M_PI * M_PI / 8).epsilon(1e-8));
  CHECK_THROWS_AS(log_ft(euclidean_ball(7), Vec::Unit(7, 0)), InputError);
}

TEST_CASE("closed form for directional ellipsoids") {
  const Vec x = v3(1, 0, 0);
  CHECK(log_ft_ellipsoid_closed_form(x, 1, 1, v3(0, 1, 0), 3) == Approx(-2 * M_PI * M_PI).epsilon(1e-14));
  CHECK(log_ft_ellipsoid_closed_form(x, 2, 1, x, 3) == Approx(-M_PI * M_PI / 2).epsilon(1e-14));
  const Vec axis = v3(1, 2, 2) / 3.0;
  const StarBody e = directional_ellipsoid(axis, 1.5, 0.5);
  for (const Vec& theta : {axis, Vec(v3(0, 0.6, 0.8)), Vec(v3(2, -1, 0).normalized())}) {
    CHECK(log_ft(e, theta).value == Approx(log_ft_ellipsoid_closed_form(axis, 1.5, 0.5, theta, 3)).epsilon(1e-6));
  }
  Vec axis4(4);
  axis4 << 0.5, 0.5, 0.5, 0.5;
  const StarBody e4 = directional_ellipsoid(axis4, 0.7, 1.2);
  CHECK(log_ft(e4, Vec::Unit(4, 2)).value ==
        Approx(log_ft_ellipsoid_closed_form(axis4, 0.7, 1.2, Vec::Unit(4, 2), 4)).epsilon(1e-5));
}

TEST_CASE("embedding verdicts") {
  const SphereGrid g3 = sphere_grid(3, 8);
  const EmbeddingReport lq = embeds_in_L0(lq_ball(3, 4.0), g3);
  CHECK(lq.verdict == Verdict::embeds);
  CHECK(lq.min_margin >= -lq.tolerance);

  const EmbeddingReport de = embeds_in_L0(directional_ellipsoid(v3(0, 0.6, 0.8), 1.5, 0.4), g3);
  CHECK(de.verdict == Verdict::embeds);

  Vec axis4(4);
  axis4 << 0.5, -0.5, 0.5, 0.5;
  EmbeddingOptions quick;
  quick.refine_evaluations = 0;
  CHECK(embeds_in_L0(directional_ellipsoid(axis4, 0.8, 1.1), sphere_grid(4, 3), quick).verdict ==
        Verdict::embeds);

  const CounterexampleRecord ce = counterexample_value(1.0);
  CHECK(ce.verdict == Verdict::fails);
  CHECK((ce.witness - Vec::Unit(4, 3)).norm() < 1e-12);
  CHECK(ce.log_ft_e4 > 0);
}

TEST_CASE("density of the ball") {
  const SphereGrid g = sphere_grid(3, 8);
  const EmbeddingReport r = embeds_in_L0(euclidean_ball(3), g);
  REQUIRE(r.verdict == Verdict::embeds);
  REQUIRE(r.has_density);
  for (const DirectionResult& d : r.per_direction) CHECK(d.density == Approx(1 / (4 * M_PI)).epsilon(1e-7));
  CHECK(r.mass == Approx(1.0).epsilon(1e-7));
  CHECK(r.constant_C == Approx(1.0).epsilon(1e-10));

  const auto samples = spectral_measure_density(euclidean_ball(3), g);
  CHECK(samples.size() == g.size());
  CHECK_THROWS_AS(spectral_measure_density(counterexample_body(1.0), sphere_grid(4, 3)), InputError);
}

TEST_CASE("embedding constant") {
  const SphereGrid g3 = sphere_grid(3, 12);
  CHECK(embedding_constant(euclidean_ball(3), g3) == Approx(1.0).epsilon(1e-12));
  CHECK(embedding_constant(euclidean_ball(5), sphere_grid(5, 4)) == Approx(4.0 / 3).epsilon(1e-12));
  const StarBody k = lq_ball(3, 3.0);
  CHECK(embedding_constant(scaled(k, 2.5), g3) == Approx(embedding_constant(k, g3) - std::log(2.5)).epsilon(1e-12));
}

TEST_CASE("logarithmic representation") {
  const auto density = [](const Vec&) { return 1 / (4 * M_PI); };
  const std::vector<Vec> pts{v3(1, 0, 0), v3(0.2, -0.7, 0.3), v3(3, 1, 2)};
  const RepresentationReport ball = verify_log_representation(euclidean_ball(3), density, 1.0, pts, 1e-6);
  CHECK(ball.pass);
  CHECK(ball.max_residual < 1e-6);
  const RepresentationReport big =
      verify_log_representation(scaled(euclidean_ball(3), 2.0), density, 1.0 - std::log(2.0), pts, 1e-6);
  CHECK(big.pass);
  const RepresentationReport wrong = verify_log_representation(euclidean_ball(3), density, 0.5, pts, 1e-6);
  CHECK_FALSE(wrong.pass);
}

TEST_CASE("negative powers") {
  const SphereGrid g = sphere_grid(3, 6);
  EmbeddingOptions quick;
  quick.refine_evaluations = 0;
  const NegPReport ball = neg_p_embed_test(euclidean_ball(3), 0.5, g, quick);
  CHECK(ball.verdict == Verdict::embeds);
  CHECK(ball.min_value == Approx(7.8748).epsilon(1e-4));
  const NegPReport ms = neg_p_embed_test(mult_sum(lq_ball(3, 4.0), euclidean_ball(3)), 0.5, g, quick);
  CHECK(ms.verdict == Verdict::embeds);
  CHECK_THROWS_AS(neg_power_ft(euclidean_ball(3), v3(1, 0, 0), 3.5), InputError);
}

TEST_CASE("parallel and serial sweeps agree") {
  const SphereGrid g = sphere_grid(3, 6);
  EmbeddingOptions par, ser;
  ser.serial = true;
  const StarBody k = lq_ball(3, 3.0);
  const EmbeddingReport a = embeds_in_L0(k, g, par);
  const EmbeddingReport b = embeds_in_L0(k, g, ser);
  REQUIRE(a.per_direction.size() == b.per_direction.size());
  for (std::size_t i = 0; i < a.per_direction.size(); ++i) CHECK(a.per_direction[i].log_ft == b.per_direction[i].log_ft);
  CHECK(a.mass == b.mass);
  CHECK(a.verdict == b.verdict);
}
