// Parallel kernels against their serial references.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "lzero/embedding.hpp"
#include "lzero/experiments.hpp"
#include "lzero/parallel.hpp"

using namespace lzero;

namespace {

double seconds(const std::function<double()>& run, double& result) {
  const auto start = std::chrono::steady_clock::now();
  result = run();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const char* name, const std::function<double()>& par, const std::function<double()>& ser) {
  double rp = 0.0, rs = 0.0;
  const double ts = seconds(ser, rs);
  const double tp = seconds(par, rp);
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2f  |diff| %.3g\n", name, ts, tp, ts / tp,
              std::abs(rp - rs));
}

}  // namespace

int main() {
  std::printf("threads: %d\n", worker_threads());

  const SphereGrid fine = sphere_grid(5, 40);
  auto smooth = [](const Vec& u) { return std::exp(u(0) * u(1)) * std::cos(3.0 * u(4)); };
  row("integrate_sphere (S^4)", [&] { return integrate_sphere(smooth, fine); },
      [&] { return integrate_sphere_serial(smooth, fine); });

  const StarBody body = lq_ball(3, 3.0);
  const SphereGrid grid = sphere_grid(3, 12);
  EmbeddingOptions par, ser;
  par.refine_evaluations = ser.refine_evaluations = 0;
  ser.serial = true;
  row("embeds_in_L0 sweep (l_3, R^3)", [&] { return embeds_in_L0(body, grid, par).mass; },
      [&] { return embeds_in_L0(body, grid, ser).mass; });

  const std::vector<double> coeffs{1.0, 0.5, 0.25};
  row("cauchy_log_moment_mc (4M)", [&] { return cauchy_log_moment_mc(1.0, coeffs, 4'000'000, 7).estimate; },
      [&] { return cauchy_log_moment_mc_serial(1.0, coeffs, 4'000'000, 7).estimate; });
  return 0;
}
