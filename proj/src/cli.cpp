#include "lzero/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lzero/approximation.hpp"
#include "lzero/body_io.hpp"
#include "lzero/embedding.hpp"
#include "lzero/errors.hpp"
#include "lzero/experiments.hpp"
#include "lzero/random.hpp"
#include "lzero/report_io.hpp"
#include "lzero/sections.hpp"

namespace lzero {
namespace {

using nlohmann::json;

struct RunConfig {
  std::string body = "ball";
  std::string other;
  int dim = 3;
  std::string xi;
  int grid_res = 0;
  double a = 0.1;
  double b = 1.0;
  double sigma = 0.1;
  double p = 0.0;
  double N = 1.0;
  long long samples = -1;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  int depth = 10;
  double a0 = 1.0;
  std::string coeffs = "1";
};

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": cannot parse \"" + item + "\" as a number");
    }
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read body spec file \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string spec_text(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
  return read_file(arg);
}

StarBody load_body(const std::string& arg, const RunConfig& cfg) {
  if (arg == "ball") return euclidean_ball(cfg.dim);
  if (arg == "counterexample") return counterexample_body(cfg.N);
  return parse_body_text(spec_text(arg));
}

int default_resolution(int n) {
  switch (n) {
    case 3: return 16;
    case 4: return 6;
    case 5: return 4;
    default: return 3;
  }
}

SphereGrid grid_for(const RunConfig& cfg, int n) {
  return sphere_grid(n, cfg.grid_res > 0 ? cfg.grid_res : default_resolution(n));
}

Vec direction(const RunConfig& cfg, int n) {
  if (cfg.xi.empty()) return Vec::Unit(n, n - 1);
  const std::vector<double> v = parse_list(cfg.xi, "--xi");
  if (static_cast<int>(v.size()) != n) throw InputError("--xi: expected " + std::to_string(n) + " components");
  Vec x = Eigen::Map<const Vec>(v.data(), n);
  if (!(x.norm() > 0)) throw InputError("--xi: zero vector");
  return x.normalized();
}

struct Output {
  json doc;
  std::string text;  // CSV
  bool is_text = false;
};

Output run_subcommand(const std::string& name, const RunConfig& cfg) {
  Output o;
  const bool csv = cfg.format == "csv";
  if (name == "cauchy-mc") {
    const std::vector<double> a = parse_list(cfg.coeffs, "--coeffs");
    const std::size_t n = cfg.samples > 0 ? static_cast<std::size_t>(cfg.samples) : 1'000'000;
    o.doc = cauchy_json(cauchy_log_moment_mc(cfg.a0, a, n, cfg.seed));
    return o;
  }
  if (name == "counterexample") {
    CounterexampleOptions co;
    co.grid_resolution = cfg.grid_res;
    const CounterexampleRecord rec = counterexample_value(cfg.N, co);
    if (csv) {
      std::ostringstream ss;
      write_counterexample_csv(ss, {rec});
      o.text = ss.str();
      o.is_text = true;
    } else {
      o.doc = counterexample_json(rec);
    }
    return o;
  }
  if (name == "dyadic") {
    json doc = json::parse(spec_text(cfg.body), nullptr, false);
    if (doc.is_discarded()) throw InputError("dyadic: --body is not valid JSON");
    // a fit report carries the product under "product"
    if (doc.is_object() && doc.contains("product")) doc = doc["product"];
    const EllipsoidProduct p = parse_product(doc);
    const EllipsoidProduct d = dyadicize_weights(p, cfg.depth);
    const SphereGrid check = grid_for(cfg, p.dim);
    double pert = 0.0;
    for (const Vec& u : check.nodes) pert = std::max(pert, std::abs(std::log(product_gauge(d, u) / product_gauge(p, u))));
    FitResult fr;
    fr.product = d;
    o.doc = fit_json(fr);
    o.doc.erase("sup_log_error");
    o.doc.erase("shift");
    o.doc.erase("diagnostic");
    o.doc["depth"] = cfg.depth;
    o.doc["sup_log_perturbation"] = round12(pert);
    return o;
  }

  const StarBody body = load_body(cfg.body, cfg);
  const int n = body.dim();
  if (name == "radial-distance") {
    if (cfg.other.empty()) throw InputError("radial-distance: --other body is required");
    const StarBody other = load_body(cfg.other, cfg);
    if (other.dim() != n) throw InputError("radial-distance: bodies differ in dimension");
    o.doc = {{"radial_distance", round12(radial_distance(body, other, grid_for(cfg, n)))}};
    return o;
  }
  if (name == "sections") {
    const SectionProfile prof(body, direction(cfg, n));
    const int count = cfg.samples >= 0 ? static_cast<int>(cfg.samples) : 101;
    if (csv) {
      std::ostringstream ss;
      write_section_csv(ss, prof, count);
      o.text = ss.str();
      o.is_text = true;
    } else {
      json rows = json::array();
      for (const auto& [t, v] : prof.samples(count)) rows.push_back({round12(t), round12(v)});
      o.doc = {{"xi", to_json(prof.direction())},
               {"support", round12(prof.support())},
               {"method", to_string(prof.method())},
               {"samples", rows}};
    }
    return o;
  }
  if (name == "log-ft") {
    const Vec xi = direction(cfg, n);
    const TransformValue v = log_ft(body, xi);
    o.doc = {{"xi", to_json(xi)},
             {"log_ft", round12(v.value)},
             {"error", round12(v.error)},
             {"noisy", v.noisy}};
    return o;
  }
  if (name == "constant") {
    o.doc = {{"constant_C", round12(embedding_constant(body, grid_for(cfg, n)))}};
    return o;
  }
  if (name == "embed-test" || name == "measure") {
    const SphereGrid grid = grid_for(cfg, n);
    if (name == "embed-test" && cfg.p != 0.0) {
      o.doc = neg_p_report_json(neg_p_embed_test(body, cfg.p, grid), true);
      return o;
    }
    const EmbeddingReport rep = embeds_in_L0(body, grid);
    if (csv) {
      std::ostringstream ss;
      write_density_csv(ss, rep, n);
      o.text = ss.str();
      o.is_text = true;
    } else if (name == "measure") {
      if (rep.verdict == Verdict::fails) throw InputError("measure: the body does not embed in L0");
      o.doc = embedding_report_json(rep, true);
    } else {
      o.doc = embedding_report_json(rep, true);
    }
    return o;
  }
  if (name == "verify-repr") {
    const SphereGrid grid = grid_for(cfg, n);
    const EmbeddingReport rep = embeds_in_L0(body, grid);
    if (rep.verdict != Verdict::embeds) throw InputError("verify-repr: the body does not pass the embedding test");
    std::vector<double> dens;
    for (const DirectionResult& d : rep.per_direction) dens.push_back(std::max(d.density, 1e-300));
    const StarBody interp = tabulated_body(grid, dens, true);
    Rng rng(cfg.seed);
    const int count = cfg.samples > 0 ? static_cast<int>(cfg.samples) : 10;
    std::vector<Vec> pts;
    for (int k = 0; k < count; ++k) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x(i) = rng.normal();
      pts.push_back(x.normalized());
    }
    const double tol = 5e-3;
    const RepresentationReport r = verify_log_representation(
        body, [&](const Vec& u) { return interp.radial(u); }, rep.constant_C, pts, tol);
    o.doc = {{"max_residual", round12(r.max_residual)},
             {"pass", r.pass},
             {"tolerance", tol},
             {"constant_C", round12(rep.constant_C)},
             {"points", count}};
    return o;
  }
  if (name == "fit") {
    if (cfg.p != 0.0) {
      PSumParams pp;
      pp.a = cfg.a;
      pp.b = cfg.b;
      pp.sigma = cfg.sigma;
      if (cfg.grid_res > 0) pp.grid_resolution = cfg.grid_res;
      o.doc = psum_fit_json(fit_psum(body, cfg.p, pp));
      return o;
    }
    FitOptions fo;
    fo.grid_resolution = cfg.grid_res > 0 ? cfg.grid_res : default_resolution(n);
    fo.check_resolution = fo.grid_resolution + 5;
    o.doc = fit_json(fit_ellipsoid_product(body, cfg.a, cfg.b, cfg.sigma, fo));
    return o;
  }
  throw InputError("unknown subcommand " + name);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lzero: L0 embeddings of star bodies"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--body", cfg.body, "body spec: inline JSON, a file path, \"ball\" or \"counterexample\"");
  app.add_option("--other", cfg.other, "second body for radial-distance");
  app.add_option("--dim", cfg.dim, "dimension for the \"ball\" shorthand")->check(CLI::Range(2, 8));
  app.add_option("--xi", cfg.xi, "direction as a comma-separated list (default: last basis vector)");
  app.add_option("--grid-res", cfg.grid_res, "sphere grid resolution (0: dimension default)");
  app.add_option("--a", cfg.a, "ellipsoid semi-axis along the atom direction");
  app.add_option("--b", cfg.b, "transverse semi-axis");
  app.add_option("--sigma", cfg.sigma, "cap radius for the measure discretization");
  app.add_option("--p", cfg.p, "p for L_{-p} tests (embed-test) or p-sum fits (fit)");
  app.add_option("--N", cfg.N, "counterexample parameter");
  app.add_option("--samples", cfg.samples, "Monte Carlo samples, section samples or test points");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.out, "output file (default: standard output)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--depth", cfg.depth, "binary depth for dyadic");
  app.add_option("--a0", cfg.a0, "constant term for cauchy-mc");
  app.add_option("--coeffs", cfg.coeffs, "Cauchy coefficients for cauchy-mc, comma-separated");
  const char* names[] = {"embed-test", "log-ft", "measure", "constant", "verify-repr", "fit",
                         "dyadic",     "counterexample", "cauchy-mc", "radial-distance", "sections"};
  const char* help[] = {"L0 (or L_{-p} with --p) embedding test over a sphere grid",
                        "transform of ln‖x‖ at one direction",
                        "density of the representing measure",
                        "the constant C of the log representation",
                        "check the log representation with the computed measure",
                        "ellipsoid-product (or p-sum with --p) approximation",
                        "dyadic refinement of product weights (--body is a product)",
                        "the R^4 counterexample record at --N",
                        "Monte Carlo E ln|a0 + Σ a_j f_j| for Cauchy f_j",
                        "radial distance between --body and --other",
                        "parallel section function samples"};
  for (std::size_t i = 0; i < std::size(names); ++i) app.add_subcommand(names[i], help[i]);
  const Tolerances defaults;
  std::ostringstream foot;
  foot << "Numerical defaults: quad_rel " << defaults.quad_rel << ", quad_abs " << defaults.quad_abs
       << ", deriv_step " << defaults.deriv_step << " (relative to the support), richardson_levels "
       << defaults.richardson_levels << ", root_tol " << defaults.root_tol << ", sphere_resolution "
       << defaults.sphere_resolution << ".\nLZERO_THREADS caps the number of worker threads.\n"
       << "Exit codes: 0 report written (any verdict), 2 input error, 3 no numerical convergence.";
  app.footer(foot.str());

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Output o = run_subcommand(name, cfg);
    std::string text;
    if (o.is_text) {
      text = o.text;
    } else {
      o.doc["seed"] = cfg.seed;
      o.doc["command"] = name;
      text = o.doc.dump(2) + "\n";
    }
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out);
      if (!f) throw InputError("cannot write output file \"" + cfg.out + "\"");
      f << text;
      if (!f) throw InputError("cannot write output file \"" + cfg.out + "\"");
    }
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << " (partial estimate " << format12(e.partial_estimate()) << ")\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace lzero
