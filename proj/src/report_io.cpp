#include "lzero/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace lzero {

using nlohmann::json;

std::string format12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format12(x).c_str(), nullptr);
}

namespace {

// JSON has no NaN; non-finite values become null.
json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return {{"xi", to_json(w->xi)}, {"value", num(w->value)}};
}

json directions_json(const std::vector<DirectionResult>& dirs, bool with_density) {
  json out = json::array();
  for (const DirectionResult& d : dirs) {
    json e = {{"xi", to_json(d.xi)}, {"log_ft", num(d.log_ft)}};
    if (with_density) e["density"] = num(d.density);
    if (d.inconclusive) e["inconclusive"] = true;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

json to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(round12(v(i)));
  return out;
}

json embedding_report_json(const EmbeddingReport& r, bool per_direction) {
  json out = {{"verdict", to_string(r.verdict)},
              {"witness", witness_json(r.witness)},
              {"min_margin", num(r.min_margin)},
              {"tolerance", num(r.tolerance)},
              {"constant_C", num(r.constant_C)},
              {"mass", num(r.mass)},
              {"inconclusive_count", r.inconclusive_count}};
  if (per_direction) out["per_direction"] = directions_json(r.per_direction, true);
  return out;
}

json neg_p_report_json(const NegPReport& r, bool per_direction) {
  json out = {{"verdict", to_string(r.verdict)},
              {"p", num(r.p)},
              {"q", num(r.q)},
              {"exceptional_q", r.exceptional},
              {"witness", witness_json(r.witness)},
              {"min_value", num(r.min_value)},
              {"tolerance", num(r.tolerance)}};
  if (per_direction) {
    json dirs = json::array();
    for (const DirectionResult& d : r.per_direction) dirs.push_back({{"xi", to_json(d.xi)}, {"value", num(d.log_ft)}});
    out["per_direction"] = dirs;
  }
  return out;
}

json counterexample_json(const CounterexampleRecord& r) {
  json out = {{"N", num(r.N)},
              {"a_N", num(r.a_N)},
              {"closed_form_value", num(r.closed_form_value)},
              {"numeric_I", num(r.numeric_I)},
              {"log_ft_e4", num(r.log_ft_e4)},
              {"verdict", to_string(r.verdict)},
              {"witness", {{"xi", to_json(r.witness)}, {"value", num(r.log_ft_e4)}}}};
  if (r.grid_report) out["grid"] = embedding_report_json(*r.grid_report, false);
  return out;
}

json cauchy_json(const CauchyMcResult& r) {
  return {{"estimate", num(r.estimate)},
          {"stderr", num(r.stderr_)},
          {"target", num(r.target)},
          {"samples", r.samples},
          {"seed", r.seed}};
}

json fit_json(const FitResult& r) {
  json product = serialize_product(r.product);
  for (auto& e : product) {
    for (auto& v : e["xi"]) v = round12(v.get<double>());
    for (const char* k : {"a", "b", "weight"}) e[k] = round12(e[k].get<double>());
  }
  return {{"product", product},
          {"parts", r.product.parts.size()},
          {"weight_sum", num(r.product.weight_sum())},
          {"sup_log_error", num(r.sup_log_error)},
          {"shift", num(r.shift)},
          {"diagnostic", r.diagnostic}};
}

json psum_fit_json(const PSumFit& r) {
  json forms = json::array();
  for (const Mat& m : r.forms) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vec(m.row(i).transpose())));
    forms.push_back(rows);
  }
  return {{"p", num(r.p)}, {"forms", forms}, {"sup_error", num(r.sup_error)}, {"exact", r.exact}};
}

void write_density_csv(std::ostream& out, const EmbeddingReport& r, int dim) {
  for (int i = 0; i < dim; ++i) out << "xi_" << i + 1 << ",";
  out << "weight,log_ft,density\n";
  for (std::size_t k = 0; k < r.per_direction.size(); ++k) {
    const DirectionResult& d = r.per_direction[k];
    for (int i = 0; i < dim; ++i) out << format12(d.xi(i)) << ",";
    out << format12(r.weights[k]) << "," << format12(d.log_ft) << "," << format12(d.density) << "\n";
  }
}

void write_counterexample_csv(std::ostream& out, const std::vector<CounterexampleRecord>& rows) {
  out << "N,a_N,closed_form_value,numeric_I,verdict\n";
  for (const CounterexampleRecord& r : rows)
    out << format12(r.N) << "," << format12(r.a_N) << "," << format12(r.closed_form_value) << ","
        << format12(r.numeric_I) << "," << to_string(r.verdict) << "\n";
}

}  // namespace lzero
