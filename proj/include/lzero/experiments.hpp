#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lzero/bodies.hpp"
#include "lzero/embedding.hpp"
#include "lzero/tolerances.hpp"

namespace lzero {

/// Positive root a_N of 1 - x^2 - N x^4.
double counterexample_root(double N, const Tolerances& tol = {});

/// Body of revolution in R^4 about x_4:
///   x_4 ∈ [-a_N, a_N],  |(x_1, x_2, x_3)| <= f_N(x_4) = (1 - x_4^2 - N x_4^4)^{1/3}.
StarBody counterexample_body(double N, const Tolerances& tol = {});

/// Closed-form value of the regularized section integral of the body at e_4:
///   (4π/3)(-N a_N + 1/a_N - 1/(3 a_N^3)).
double counterexample_closed_form(double N, const Tolerances& tol = {});

struct CounterexampleRecord {
  double N = 0.0;
  double a_N = 0.0;
  double closed_form_value = 0.0;
  double numeric_I = 0.0;  ///< regularized section integral at e_4 by quadrature
  double log_ft_e4 = 0.0;  ///< -12 · numeric_I
  Verdict verdict = Verdict::inconclusive;  ///< sign test at e_4
  Vec witness;                              ///< e_4
  std::optional<EmbeddingReport> grid_report;  ///< optional full-sphere sweep
};

struct CounterexampleOptions {
  Tolerances tol;
  /// When positive, also run embeds_in_L0 on a sphere grid of this resolution.
  int grid_resolution = 0;
};

CounterexampleRecord counterexample_value(double N, const CounterexampleOptions& opts = {});

/// N* in (N_lo, N_hi) where the closed-form value changes sign.
double find_counterexample_threshold(double N_lo, double N_hi, const Tolerances& tol = {});

/// Records for several N, evaluated in parallel, in input order.
std::vector<CounterexampleRecord> counterexample_scan(const std::vector<double>& Ns,
                                                      const CounterexampleOptions& opts = {});

struct CauchyMcResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double target = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of E ln|a0 + Σ a_j f_j| with f_j independent standard
/// Cauchy variables, each drawn as a ratio of two standard normals. The target
/// is ln sqrt(a0^2 + (Σ|a_j|)^2). Batches use seeds derived from `seed`, so
/// the result does not depend on the thread count.
CauchyMcResult cauchy_log_moment_mc(double a0, const std::vector<double>& a, std::size_t samples,
                                    std::uint64_t seed);

/// Single-threaded reference for cauchy_log_moment_mc (identical output).
CauchyMcResult cauchy_log_moment_mc_serial(double a0, const std::vector<double>& a, std::size_t samples,
                                           std::uint64_t seed);

/// (1/π) ∫_R ln|x| / (1 + x^2) dx by quadrature (the exact value is 0).
double cauchy_log_abs_mean(const Tolerances& tol = {});

}  // namespace lzero
