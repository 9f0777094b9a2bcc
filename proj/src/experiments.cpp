#include "lzero/experiments.hpp"

#include <cmath>
#include <limits>

#include "lzero/errors.hpp"
#include "lzero/parallel.hpp"
#include "lzero/quadrature.hpp"
#include "lzero/random.hpp"
#include "lzero/roots.hpp"

namespace lzero {

double counterexample_root(double N, const Tolerances& tol) {
  if (!(N >= 0) || !std::isfinite(N)) throw InputError("counterexample: N must be a finite number >= 0");
  if (N == 0.0) return 1.0;
  return bracket_root([N](double x) { return 1.0 - x * x - N * x * x * x * x; }, 0.0, 1.0, tol);
}

StarBody counterexample_body(double N, const Tolerances& tol) {
  const double a = counterexample_root(N, tol);
  auto profile = [N](double x) { return std::cbrt(std::max(0.0, 1.0 - x * x - N * x * x * x * x)); };
  // f^m - f(0)^m; exact polynomial for m = 3
  auto power_delta = [N](double t, int m) {
    const double d = -t * t - N * t * t * t * t;
    if (m == 3) return d;
    return std::expm1(m / 3.0 * std::log1p(std::max(d, -1.0)));
  };
  return revolution_body(profile, 4, a, 3, {"counterexample", {N}}, power_delta);
}

double counterexample_closed_form(double N, const Tolerances& tol) {
  const double a = counterexample_root(N, tol);
  return 4.0 * M_PI / 3.0 * (-N * a + 1.0 / a - 1.0 / (3.0 * a * a * a));
}

CounterexampleRecord counterexample_value(double N, const CounterexampleOptions& opts) {
  CounterexampleRecord rec;
  rec.N = N;
  rec.a_N = counterexample_root(N, opts.tol);
  rec.closed_form_value = counterexample_closed_form(N, opts.tol);
  const StarBody body = counterexample_body(N, opts.tol);
  rec.witness = Vec::Unit(4, 3);
  SectionOptions so;
  so.tol = opts.tol;
  so.taylor_order = 2;
  const RegularizedIntegral I = regularized_section_integral(SectionProfile(body, rec.witness, so));
  rec.numeric_I = I.value;
  rec.log_ft_e4 = -12.0 * I.value;
  const double tol = 1e-6 * std::abs(rec.log_ft_e4);
  if (I.noisy && std::abs(I.value) <= I.error)
    rec.verdict = Verdict::inconclusive;
  else
    rec.verdict = -rec.log_ft_e4 < -tol ? Verdict::fails : Verdict::embeds;
  if (opts.grid_resolution > 0) {
    EmbeddingOptions eo;
    eo.transform.tol = opts.tol;
    rec.grid_report = embeds_in_L0(body, sphere_grid(4, opts.grid_resolution), eo);
  }
  return rec;
}

double find_counterexample_threshold(double N_lo, double N_hi, const Tolerances& tol) {
  if (!(N_lo >= 0) || !(N_hi > N_lo)) throw InputError("counterexample threshold: need 0 <= N_lo < N_hi");
  auto f = [&](double N) { return counterexample_closed_form(N, tol); };
  const double f_lo = f(N_lo), f_hi = f(N_hi);
  if (!(f_lo > 0 && f_hi < 0))
    throw InputError("counterexample threshold: the value does not change sign from positive to negative on the range");
  return bracket_root(f, N_lo, N_hi, f_lo, f_hi, tol.root_tol);
}

std::vector<CounterexampleRecord> counterexample_scan(const std::vector<double>& Ns,
                                                      const CounterexampleOptions& opts) {
  return parallel_map<CounterexampleRecord>(Ns.size(), [&](std::size_t i) { return counterexample_value(Ns[i], opts); });
}

namespace {

constexpr std::size_t kBatch = 1 << 16;

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments merge(const Moments& a, const Moments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments out;
  out.count = a.count + b.count;
  const double d = b.mean - a.mean;
  out.mean = a.mean + d * static_cast<double>(b.count) / out.count;
  out.m2 = a.m2 + b.m2 + d * d * static_cast<double>(a.count) * b.count / out.count;
  return out;
}

Moments batch(double a0, const std::vector<double>& a, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  Moments m;
  for (std::size_t s = 0; s < count; ++s) {
    double v;
    do {
      double sum = a0;
      for (double aj : a) sum += aj * (rng.normal() / rng.normal());
      v = std::log(std::abs(sum));
    } while (!std::isfinite(v));
    ++m.count;
    const double d = v - m.mean;
    m.mean += d / m.count;
    m.m2 += d * (v - m.mean);
  }
  return m;
}

CauchyMcResult run_mc(double a0, const std::vector<double>& a, std::size_t samples, std::uint64_t seed,
                      bool parallel) {
  double s1 = 0.0;
  for (double aj : a) s1 += std::abs(aj);
  if (a0 == 0.0 && s1 == 0.0) throw InputError("cauchy_log_moment_mc: all coefficients are zero");
  if (!std::isfinite(a0) || !std::isfinite(s1)) throw InputError("cauchy_log_moment_mc: non-finite coefficient");
  CauchyMcResult r;
  r.samples = samples;
  r.seed = seed;
  r.target = 0.5 * std::log(a0 * a0 + s1 * s1);
  if (s1 == 0.0) {
    r.estimate = std::log(std::abs(a0));
    return r;
  }
  if (samples < 10'000) throw InputError("cauchy_log_moment_mc: at least 10000 samples are required");
  const std::size_t batches = (samples + kBatch - 1) / kBatch;
  std::function<Moments(std::size_t)> job = [&](std::size_t b) {
    const std::size_t count = std::min(kBatch, samples - b * kBatch);
    return batch(a0, a, count, derive_seed(seed, b));
  };
  const std::vector<Moments> parts = parallel ? parallel_map<Moments>(batches, job) : serial_map<Moments>(batches, job);
  Moments total;
  for (const Moments& m : parts) total = merge(total, m);
  r.estimate = total.mean;
  r.stderr_ = std::sqrt(total.m2 / (total.count - 1) / total.count);
  return r;
}

}  // namespace

CauchyMcResult cauchy_log_moment_mc(double a0, const std::vector<double>& a, std::size_t samples,
                                    std::uint64_t seed) {
  return run_mc(a0, a, samples, seed, true);
}

CauchyMcResult cauchy_log_moment_mc_serial(double a0, const std::vector<double>& a, std::size_t samples,
                                           std::uint64_t seed) {
  return run_mc(a0, a, samples, seed, false);
}

double cauchy_log_abs_mean(const Tolerances& tol) {
  // even integrand: (2/π) [∫_0^1 + ∫_1^∞] ln x / (1 + x^2) dx
  auto f = [](double x) { return std::log(x) / (1.0 + x * x); };
  const double inner = integrate_1d(f, 0.0, 1.0, tol, EndpointHint::power_singularity(0.0));
  const double outer = integrate_1d(f, 1.0, kInfinity, tol);
  return 2.0 / M_PI * (inner + outer);
}

}  // namespace lzero
