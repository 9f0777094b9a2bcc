#include "lzero/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lzero/errors.hpp"
#include "lzero/parallel.hpp"
#include "lzero/quadrature.hpp"
#include "lzero/special.hpp"

namespace lzero {
namespace {

void require_dims(int n, const char* who) {
  if (n < 3 || n > 6) throw InputError(std::string(who) + ": dimension must be between 3 and 6");
}

void require_unit(const Vec& xi, int n, const char* who) {
  if (xi.size() != n) throw InputError(std::string(who) + ": direction has the wrong dimension");
  if (std::abs(xi.norm() - 1.0) > 1e-8) throw InputError(std::string(who) + ": direction must be a unit vector");
}

double median_abs(std::vector<double> v) {
  if (v.empty()) return 0.0;
  for (double& x : v) x = std::abs(x);
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Node indices evaluated by a sweep: one per antipodal pair.
std::vector<int> representatives(const SphereGrid& grid) {
  std::vector<int> reps;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i)
    if (grid.antipode.empty() || grid.antipode[i] >= i) reps.push_back(i);
  return reps;
}

struct Sweep {
  std::vector<DirectionResult> results;
  std::vector<bool> failed;
};

Sweep sweep(const SphereGrid& grid, const std::function<TransformValue(const Vec&)>& eval, bool serial) {
  const std::vector<int> reps = representatives(grid);
  struct Item {
    TransformValue v;
    bool failed = false;
  };
  const std::function<Item(std::size_t)> job = [&](std::size_t k) {
    Item it;
    try {
      it.v = eval(grid.nodes[reps[k]]);
      if (!std::isfinite(it.v.value)) it.failed = true;
    } catch (const ConvergenceError&) {
      it.failed = true;
    }
    return it;
  };
  const std::vector<Item> items = serial ? serial_map<Item>(reps.size(), job) : parallel_map<Item>(reps.size(), job);
  Sweep s;
  s.results.resize(grid.size());
  s.failed.assign(grid.size(), false);
  auto store = [&](int i, const Item& it) {
    DirectionResult& r = s.results[i];
    r.xi = grid.nodes[i];
    r.log_ft = it.failed ? std::numeric_limits<double>::quiet_NaN() : it.v.value;
    r.error = it.v.error;
    r.noisy = it.v.noisy || it.failed;
    r.inconclusive = it.failed || it.v.sign_uncertain();
    s.failed[i] = it.failed;
  };
  for (std::size_t k = 0; k < reps.size(); ++k) {
    store(reps[k], items[k]);
    if (!grid.antipode.empty()) store(grid.antipode[reps[k]], items[k]);
  }
  return s;
}

struct Refined {
  Vec xi;
  double value = std::numeric_limits<double>::infinity();
};

double grid_spacing(const SphereGrid& grid) {
  const int n = grid.dim;
  return std::pow(sphere_area(n) / std::max<std::size_t>(grid.size(), 1), 1.0 / (n - 1));
}

// Pattern search for the minimum of eval over the sphere. Stops early once
// the value drops below -tol.
Refined pattern_search(const std::function<TransformValue(const Vec&)>& eval, const Vec& start, double start_value,
                       double step, double tol, int budget) {
  Refined best{start, start_value};
  int used = 0;
  while (used < budget && step > 2e-3 && best.value >= -tol) {
    const Mat tangent = orthogonal_complement(best.xi);
    std::vector<Vec> cand;
    for (int j = 0; j < tangent.cols(); ++j)
      for (double sign : {1.0, -1.0}) cand.push_back((best.xi + sign * step * tangent.col(j)).normalized());
    const std::vector<double> vals = parallel_map<double>(cand.size(), [&](std::size_t k) {
      try {
        const TransformValue v = eval(cand[k]);
        if (!std::isfinite(v.value) || v.sign_uncertain()) return std::numeric_limits<double>::infinity();
        return v.value;
      } catch (const ConvergenceError&) {
        return std::numeric_limits<double>::infinity();
      }
    });
    used += static_cast<int>(cand.size());
    const auto it = std::min_element(vals.begin(), vals.end());
    if (*it < best.value)
      best = {cand[it - vals.begin()], *it};
    else
      step *= 0.5;
  }
  return best;
}

struct Probe {
  Vec xi;
  double value = 0.0;  // sign * transform
};

// Coordinate directions, where bodies with coordinate symmetries have critical
// points of the transform that a coarse grid can miss.
std::vector<Probe> axis_probes(const std::function<TransformValue(const Vec&)>& eval, int n) {
  return parallel_map<Probe>(n, [&](std::size_t i) {
    Probe p{Vec::Unit(n, static_cast<int>(i)), std::numeric_limits<double>::infinity()};
    try {
      const TransformValue v = eval(p.xi);
      if (std::isfinite(v.value) && !v.sign_uncertain()) p.value = v.value;
    } catch (const ConvergenceError&) {
    }
    return p;
  });
}

// Multi-start search from up to three separated local minima of the sweep
// values (sign * log_ft) and from axis probes lying below the grid nearby.
Refined refine_sweep(const std::function<TransformValue(const Vec&)>& eval, const Sweep& s, double sign,
                     const std::vector<Probe>& probes, const SphereGrid& grid, double tol, int budget) {
  const double h = grid_spacing(grid);
  std::vector<int> order;
  for (std::size_t i = 0; i < s.results.size(); ++i)
    if (!s.results[i].inconclusive) order.push_back(static_cast<int>(i));
  auto value = [&](int i) { return sign * s.results[i].log_ft; };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return value(a) < value(b); });
  auto apart = [](const Vec& a, const Vec& b) { return std::min((a - b).norm(), (a + b).norm()); };
  std::vector<Probe> starts;
  for (int i : order) {
    if (starts.size() == 3) break;
    bool local = true;
    for (int j : order)
      if (value(j) < value(i) && (s.results[j].xi - s.results[i].xi).norm() < 1.5 * h) {
        local = false;
        break;
      }
    for (const Probe& st : starts)
      if (apart(st.xi, s.results[i].xi) < 2.0 * h) local = false;
    if (local) starts.push_back({s.results[i].xi, value(i)});
  }
  for (const Probe& p : probes) {
    if (!std::isfinite(p.value)) continue;
    double nearest = std::numeric_limits<double>::infinity(), dist = nearest;
    for (int j : order) {
      const double d = (s.results[j].xi - p.xi).norm();
      if (d < dist) {
        dist = d;
        nearest = value(j);
      }
    }
    if (p.value < nearest) starts.push_back(p);
  }
  Refined best;
  for (const Probe& st : starts) {
    const Refined r = pattern_search(eval, st.xi, st.value, std::min(h, 0.5), tol, budget);
    if (r.value < best.value) best = r;
    if (best.value < -tol) break;
  }
  return best;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::embeds: return "embeds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

TransformValue log_ft(const StarBody& body, const Vec& xi, const TransformOptions& opts) {
  const int n = body.dim();
  require_dims(n, "log_ft");
  require_unit(xi, n, "log_ft");
  SectionOptions so;
  so.tol = opts.tol;
  so.method = opts.method;
  so.taylor_order = n % 2 ? n - 1 : n - 2;
  const SectionProfile profile(body, xi, so);
  TransformValue out;
  if (n % 2) {
    const DerivativeEstimate d = profile.derivative(n - 1);
    const double sign = ((n + 1) / 2) % 2 ? -1.0 : 1.0;
    out.value = sign * M_PI * d.value;
    out.error = M_PI * d.error;
    out.noisy = d.noisy;
  } else {
    const double a_n = 2.0 * ((n / 2 + 1) % 2 ? -1.0 : 1.0) * std::tgamma(n);
    const RegularizedIntegral r = regularized_section_integral(profile);
    out.value = a_n * r.value;
    out.error = std::abs(a_n) * r.error;
    out.noisy = r.noisy;
  }
  return out;
}

TransformValue log_ft_homogeneous(const StarBody& body, const Vec& y, const TransformOptions& opts) {
  const double len = y.norm();
  if (!(len > 0)) throw InputError("log_ft: zero vector");
  TransformValue v = log_ft(body, y / len, opts);
  const double s = std::pow(len, -body.dim());
  v.value *= s;
  v.error *= s;
  return v;
}

double log_ft_ellipsoid_closed_form(const Vec& x, double a, double b, const Vec& theta, int n) {
  if (!(a > 0) || !(b > 0)) throw InputError("log_ft_ellipsoid_closed_form: a and b must be positive");
  if (x.size() != n || theta.size() != n) throw InputError("log_ft_ellipsoid_closed_form: dimension mismatch");
  const Vec u = x.normalized();
  const double c = u.dot(theta);
  const double perp = std::max(0.0, theta.squaredNorm() - c * c);
  const double gauge = std::sqrt(c * c / (b * b) + perp / (a * a));  // ‖θ‖ for E_{b,a}(x)
  const double k = std::pow(2.0, n - 1) * std::pow(M_PI, 0.5 * n) * std::tgamma(0.5 * n) / (std::pow(a, n - 1) * b);
  return -k * std::pow(gauge, -n);
}

EmbeddingReport embeds_in_L0(const StarBody& body, const SphereGrid& grid, const EmbeddingOptions& opts) {
  const int n = body.dim();
  require_dims(n, "embeds_in_L0");
  if (grid.dim != n) throw InputError("embeds_in_L0: grid dimension differs from body dimension");
  Sweep s = sweep(grid, [&](const Vec& xi) { return log_ft(body, xi, opts.transform); }, opts.serial);

  EmbeddingReport rep;
  rep.weights = grid.weights;
  std::vector<double> vals;
  for (std::size_t i = 0; i < s.results.size(); ++i)
    if (!s.failed[i]) vals.push_back(s.results[i].log_ft);
  rep.tolerance = opts.absolute_tol ? *opts.absolute_tol : opts.relative_tol * median_abs(vals);

  rep.min_margin = std::numeric_limits<double>::infinity();
  int worst = -1;
  for (std::size_t i = 0; i < s.results.size(); ++i) {
    const DirectionResult& r = s.results[i];
    if (r.inconclusive) {
      ++rep.inconclusive_count;
      continue;
    }
    const double margin = -r.log_ft;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      worst = static_cast<int>(i);
    }
  }
  if (worst < 0) rep.min_margin = std::numeric_limits<double>::quiet_NaN();

  const double frac = grid.size() ? static_cast<double>(rep.inconclusive_count) / grid.size() : 1.0;
  if (frac > opts.max_inconclusive || worst < 0)
    rep.verdict = Verdict::inconclusive;
  else if (rep.min_margin < -rep.tolerance)
    rep.verdict = Verdict::fails;
  else
    rep.verdict = Verdict::embeds;
  if (worst >= 0 && rep.verdict != Verdict::embeds)
    rep.witness = Witness{s.results[worst].xi, s.results[worst].log_ft};
  if (rep.verdict == Verdict::embeds && opts.refine_evaluations > 0) {
    auto margin = [&](const Vec& xi) {
      TransformValue v = log_ft(body, xi, opts.transform);
      v.value = -v.value;
      return v;
    };
    const std::vector<Probe> probes = axis_probes(margin, n);
    Refined r;
    for (const Probe& p : probes)
      if (p.value < r.value) r = {p.xi, p.value};
    if (r.value >= -rep.tolerance) {
      const Refined found = refine_sweep(margin, s, -1.0, probes, grid, rep.tolerance, opts.refine_evaluations);
      if (found.value < r.value) r = found;
    }
    rep.min_margin = std::min(rep.min_margin, r.value);
    if (r.value < -rep.tolerance) {
      rep.verdict = Verdict::fails;
      rep.witness = Witness{r.xi, -r.value};
    }
  }

  const double norm = std::pow(2.0 * M_PI, -n);
  rep.mass = 0.0;
  for (std::size_t i = 0; i < s.results.size(); ++i) {
    DirectionResult& r = s.results[i];
    r.density = -norm * r.log_ft;
    if (std::isfinite(r.density)) rep.mass += grid.weights[i] * r.density;
  }
  rep.has_density = rep.verdict == Verdict::embeds;
  rep.constant_C = embedding_constant(body, grid);
  rep.per_direction = std::move(s.results);
  return rep;
}

std::vector<DensitySample> spectral_measure_density(const StarBody& body, const SphereGrid& grid,
                                                    const EmbeddingOptions& opts) {
  const EmbeddingReport rep = embeds_in_L0(body, grid, opts);
  if (rep.verdict == Verdict::fails) {
    std::string where;
    for (int i = 0; i < rep.witness->xi.size(); ++i) where += (i ? "," : "") + std::to_string(rep.witness->xi(i));
    throw InputError("spectral_measure_density: body fails the sign test at xi = (" + where + ")");
  }
  if (rep.verdict == Verdict::inconclusive)
    throw ConvergenceError("spectral_measure_density: too many inconclusive directions", rep.mass);
  std::vector<DensitySample> out;
  out.reserve(rep.per_direction.size());
  for (const DirectionResult& r : rep.per_direction) out.push_back({r.xi, r.density});
  return out;
}

double embedding_constant(const StarBody& body, const SphereGrid& grid) {
  const int n = body.dim();
  if (grid.dim != n) throw InputError("embedding_constant: grid dimension differs from body dimension");
  const double mean = integrate_sphere([&](const Vec& u) { return std::log(body.gauge(u)); }, grid) /
                      grid.total_weight();
  return mean + 0.5 * (digamma(0.5 * n) - digamma(0.5));
}

RepresentationReport verify_log_representation(const StarBody& body,
                                               const std::function<double(const Vec&)>& density, double C,
                                               const std::vector<Vec>& sample_points, double tol,
                                               const RepresentationOptions& opts) {
  const int n = body.dim();
  if (n < 3) throw InputError("verify_log_representation: dimension must be at least 3");
  const SphereGrid fiber = sphere_grid(n - 1, opts.fiber_resolution);
  const GaussRule& rule = gauss_legendre_rule(opts.radial_points);
  const double half_power = 0.5 * (n - 3);

  // ∫_{S^{n-1}} ln|(x̂, ξ)| dμ(ξ) and the total mass, in polar coordinates about x̂:
  // ξ = t x̂ + sqrt(1 - t^2) E ω, dξ = (1 - t^2)^{(n-3)/2} dt dω.
  auto polar = [&](const Vec& xhat, double& mass) {
    const Mat frame = orthogonal_complement(xhat);
    auto ring = [&](double t) {
      const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
      double s = 0.0;
      for (std::size_t i = 0; i < fiber.size(); ++i) s += fiber.weights[i] * density(t * xhat + r * (frame * fiber.nodes[i]));
      return s;
    };
    double log_part = 0.0;
    mass = 0.0;
    for (double sign : {1.0, -1.0}) {
      // t = s^3 on (0, 1/2]: ln t = 3 ln s, dt = 3 s^2 ds
      const double s_hi = std::cbrt(0.5);
      for (int i = 0; i < opts.radial_points; ++i) {
        const double s = 0.5 * s_hi * (rule.x[i] + 1.0);
        const double w = 0.5 * s_hi * rule.w[i];
        const double t = s * s * s;
        const double g = ring(sign * t) * std::pow(1.0 - t * t, half_power) * 3.0 * s * s * w;
        log_part += g * 3.0 * std::log(s);
        mass += g;
      }
      // t = 1 - u^2 on [1/2, 1): (1 - t^2)^{(n-3)/2} = u^{n-3} (2 - u^2)^{(n-3)/2}, dt = 2u du
      const double u_hi = std::sqrt(0.5);
      for (int i = 0; i < opts.radial_points; ++i) {
        const double u = 0.5 * u_hi * (rule.x[i] + 1.0);
        const double w = 0.5 * u_hi * rule.w[i];
        const double t = 1.0 - u * u;
        const double g = ring(sign * t) * std::pow(u, n - 3) * std::pow(2.0 - u * u, half_power) * 2.0 * u * w;
        log_part += g * std::log(t);
        mass += g;
      }
    }
    return log_part;
  };

  RepresentationReport rep;
  for (const Vec& x : sample_points) {
    if (x.size() != n) throw InputError("verify_log_representation: sample point has the wrong dimension");
    const double len = x.norm();
    if (!(len > 0)) throw InputError("verify_log_representation: zero sample point");
    double mass = 0.0;
    const double integral = polar(x / len, mass) + std::log(len) * mass;
    if (!std::isfinite(integral)) throw ConvergenceError("verify_log_representation: non-finite integral", integral);
    rep.residuals.push_back(std::abs(std::log(body.gauge(x)) - integral - C));
  }
  rep.max_residual = rep.residuals.empty() ? 0.0 : *std::max_element(rep.residuals.begin(), rep.residuals.end());
  rep.pass = rep.max_residual <= tol;
  return rep;
}

TransformValue neg_power_ft(const StarBody& body, const Vec& xi, double p, const TransformOptions& opts,
                            bool* exceptional) {
  const int n = body.dim();
  require_dims(n, "neg_p_embed_test");
  require_unit(xi, n, "neg_p_embed_test");
  if (!(p > 0) || !(p < n - 1)) throw InputError("neg_p_embed_test: p must lie in (0, n-1)");
  const double q = n - 1 - p;
  const double qi = std::round(q);
  const bool integer = std::abs(q - qi) < 1e-12;
  const bool odd = integer && static_cast<long>(qi) % 2 != 0;
  if (exceptional) *exceptional = odd;

  SectionOptions so;
  so.tol = opts.tol;
  so.method = opts.method;
  so.taylor_order = std::min(6, 2 * static_cast<int>(std::ceil((q + 1e-3) / 2.0)));
  const SectionProfile profile(body, xi, so);

  auto at = [&](double qq) {
    TransformValue v;
    const double factor = M_PI * (n - 1 - qq) / std::cos(qq * M_PI / 2.0);
    const FractionalDerivative d = fractional_derivative(profile, qq);
    v.value = factor * d.value;
    v.error = std::abs(factor) * d.error;
    v.noisy = d.noisy;
    return v;
  };
  if (odd) {
    const TransformValue lo = at(q - 1e-3), hi = at(q + 1e-3);
    return {0.5 * (lo.value + hi.value), 0.5 * (lo.error + hi.error) + 0.5 * std::abs(lo.value - hi.value),
            lo.noisy || hi.noisy};
  }
  if (integer) {
    // even integer order: the fractional derivative is the ordinary one
    const DerivativeEstimate d = profile.derivative(static_cast<int>(qi));
    const double factor = M_PI * p / std::cos(qi * M_PI / 2.0);
    return {factor * d.value, std::abs(factor) * d.error, d.noisy};
  }
  return at(q);
}

NegPReport neg_p_embed_test(const StarBody& body, double p, const SphereGrid& grid, const EmbeddingOptions& opts) {
  const int n = body.dim();
  require_dims(n, "neg_p_embed_test");
  if (grid.dim != n) throw InputError("neg_p_embed_test: grid dimension differs from body dimension");
  if (!(p > 0) || !(p < n - 1)) throw InputError("neg_p_embed_test: p must lie in (0, n-1)");
  NegPReport rep;
  rep.p = p;
  rep.q = n - 1 - p;
  const double qi = std::round(rep.q);
  rep.exceptional = std::abs(rep.q - qi) < 1e-12 && static_cast<long>(qi) % 2 != 0;
  Sweep s = sweep(grid, [&](const Vec& xi) { return neg_power_ft(body, xi, p, opts.transform); }, opts.serial);

  std::vector<double> vals;
  for (std::size_t i = 0; i < s.results.size(); ++i)
    if (!s.failed[i]) vals.push_back(s.results[i].log_ft);
  rep.tolerance = opts.absolute_tol ? *opts.absolute_tol : opts.relative_tol * median_abs(vals);

  rep.min_value = std::numeric_limits<double>::infinity();
  int worst = -1;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < s.results.size(); ++i) {
    const DirectionResult& r = s.results[i];
    if (r.inconclusive) {
      ++bad;
      continue;
    }
    if (r.log_ft < rep.min_value) {
      rep.min_value = r.log_ft;
      worst = static_cast<int>(i);
    }
  }
  const double frac = grid.size() ? static_cast<double>(bad) / grid.size() : 1.0;
  if (frac > opts.max_inconclusive || worst < 0)
    rep.verdict = Verdict::inconclusive;
  else if (rep.min_value < -rep.tolerance)
    rep.verdict = Verdict::fails;
  else
    rep.verdict = Verdict::embeds;
  if (worst >= 0 && rep.verdict != Verdict::embeds)
    rep.witness = Witness{s.results[worst].xi, s.results[worst].log_ft};
  if (rep.verdict == Verdict::embeds && opts.refine_evaluations > 0) {
    auto value = [&](const Vec& xi) { return neg_power_ft(body, xi, p, opts.transform); };
    const std::vector<Probe> probes = axis_probes(value, n);
    Refined r;
    for (const Probe& p : probes)
      if (p.value < r.value) r = {p.xi, p.value};
    if (r.value >= -rep.tolerance) {
      const Refined found = refine_sweep(value, s, 1.0, probes, grid, rep.tolerance, opts.refine_evaluations);
      if (found.value < r.value) r = found;
    }
    rep.min_value = std::min(rep.min_value, r.value);
    if (r.value < -rep.tolerance) {
      rep.verdict = Verdict::fails;
      rep.witness = Witness{r.xi, r.value};
    }
  }
  rep.per_direction = std::move(s.results);
  return rep;
}

}  // namespace lzero
