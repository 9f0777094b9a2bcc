#include "lzero/body_io.hpp"

#include <cmath>

#include "lzero/errors.hpp"
#include "lzero/experiments.hpp"

namespace lzero {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError("body spec " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& field(const json& j, const std::string& where, const char* key) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where, const char* key) {
  const json& v = field(j, where, key);
  if (!v.is_number()) fail(where + "/" + key, "expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& where, const char* key) {
  const json& v = field(j, where, key);
  if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
  return v.get<int>();
}

Vec vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of numbers");
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(where + "/" + std::to_string(i), "expected a number");
    out(static_cast<int>(i)) = v[i].get<double>();
  }
  return out;
}

Mat matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a square array of rows");
  const int n = static_cast<int>(v.size());
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    Vec row = vector(v[i], where + "/" + std::to_string(i));
    if (row.size() != n) fail(where + "/" + std::to_string(i), "row length differs from row count");
    m.row(i) = row.transpose();
  }
  return m;
}

json to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Mat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(to_json(Vec(m.row(i).transpose())));
  return out;
}

StarBody parse_product(const json& spec, const std::string& where) {
  std::vector<std::pair<StarBody, double>> parts;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    const json& p = spec[i];
    Vec xi = vector(field(p, w, "xi"), w + "/xi");
    parts.emplace_back(directional_ellipsoid(xi, number(p, w, "a"), number(p, w, "b")),
                       number(p, w, "weight"));
  }
  if (parts.empty()) fail(where, "empty ellipsoid product");
  return log_blend(std::move(parts));
}

StarBody parse(const json& spec, const std::string& where) {
  if (spec.is_array()) return parse_product(spec, where);
  const json& kind_field = field(spec, where, "kind");
  if (!kind_field.is_string()) fail(where + "/kind", "expected a string");
  const std::string kind = kind_field.get<std::string>();
  try {
    if (kind == "ball") return euclidean_ball(integer(spec, where, "dim"));
    if (kind == "lq") return lq_ball(integer(spec, where, "dim"), number(spec, where, "q"));
    if (kind == "directional_ellipsoid")
      return directional_ellipsoid(vector(field(spec, where, "axis"), where + "/axis"),
                                   number(spec, where, "a"), number(spec, where, "b"));
    if (kind == "ellipsoid") return ellipsoid(matrix(field(spec, where, "matrix"), where + "/matrix"));
    if (kind == "linear_image")
      return linear_image(matrix(field(spec, where, "T"), where + "/T"),
                          parse(field(spec, where, "base"), where + "/base"));
    if (kind == "mult_sum")
      return mult_sum(parse(field(spec, where, "left"), where + "/left"),
                      parse(field(spec, where, "right"), where + "/right"));
    if (kind == "p_sum")
      return p_sum(number(spec, where, "p"), parse(field(spec, where, "left"), where + "/left"),
                   parse(field(spec, where, "right"), where + "/right"));
    if (kind == "log_blend") {
      const json& parts = field(spec, where, "parts");
      if (!parts.is_array()) fail(where + "/parts", "expected an array");
      std::vector<std::pair<StarBody, double>> out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string w = where + "/parts/" + std::to_string(i);
        out.emplace_back(parse(field(parts[i], w, "body"), w + "/body"), number(parts[i], w, "weight"));
      }
      return log_blend(std::move(out));
    }
    if (kind == "revolution") {
      const json& prof = field(spec, where, "profile");
      if (!prof.is_string()) fail(where + "/profile", "expected a profile name");
      const std::string name = prof.get<std::string>();
      if (name == "counterexample") {
        const int dim = spec.contains("dim") ? integer(spec, where, "dim") : 4;
        if (dim != 4) fail(where + "/dim", "the counterexample profile is defined in dimension 4");
        return counterexample_body(number(spec, where, "N"));
      }
      if (name == "sphere") return sphere_revolution_body(integer(spec, where, "dim"));
      fail(where + "/profile", "unknown profile \"" + name + "\"");
    }
    if (kind == "tabulated") {
      const json& nodes = field(spec, where, "nodes");
      const json& weights = field(spec, where, "weights");
      const json& radii = field(spec, where, "radii");
      if (!nodes.is_array() || !weights.is_array() || !radii.is_array())
        fail(where, "tabulated body needs arrays nodes, weights, radii");
      SphereGrid g;
      g.dim = integer(spec, where, "dim");
      g.kind = GridKind::stochastic;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        g.nodes.push_back(vector(nodes[i], where + "/nodes/" + std::to_string(i)));
      g.weights = weights.get<std::vector<double>>();
      const bool interp = spec.value("interpolate", true);
      return tabulated_body(std::move(g), radii.get<std::vector<double>>(), interp);
    }
  } catch (const InputError&) {
    throw;
  } catch (const json::exception& e) {
    fail(where, e.what());
  }
  fail(where + "/kind", "unknown body kind \"" + kind + "\"");
}

}  // namespace

StarBody parse_body(const json& spec) { return parse(spec, ""); }

StarBody parse_body_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("body spec: malformed JSON at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
  return parse_body(j);
}

StarBody sphere_revolution_body(int n) {
  return revolution_body([](double t) { return std::sqrt(std::max(0.0, 1.0 - t * t)); }, n, 1.0, n - 1,
                         {"sphere", {}},
                         [](double t, int m) { return std::expm1(0.5 * m * std::log1p(-t * t)); });
}

json serialize_body(const StarBody& body) {
  const Shape& s = body.shape();
  const int n = body.dim();
  if (std::holds_alternative<EuclideanBall>(s.v)) return {{"kind", "ball"}, {"dim", n}};
  if (auto* b = std::get_if<LqBall>(&s.v)) return {{"kind", "lq"}, {"dim", n}, {"q", b->q}};
  if (auto* e = std::get_if<DirectionalEllipsoid>(&s.v))
    return {{"kind", "directional_ellipsoid"}, {"axis", to_json(e->axis)}, {"a", e->a}, {"b", e->b}};
  if (auto* e = std::get_if<Ellipsoid>(&s.v)) return {{"kind", "ellipsoid"}, {"matrix", to_json(e->form)}};
  if (auto* l = std::get_if<LinearImage>(&s.v))
    return {{"kind", "linear_image"}, {"T", to_json(l->transform)}, {"base", serialize_body(l->base)}};
  if (auto* m = std::get_if<MultSum>(&s.v))
    return {{"kind", "mult_sum"}, {"left", serialize_body(m->left)}, {"right", serialize_body(m->right)}};
  if (auto* p = std::get_if<PSum>(&s.v))
    return {{"kind", "p_sum"},
            {"p", p->p},
            {"left", serialize_body(p->left)},
            {"right", serialize_body(p->right)}};
  if (auto* b = std::get_if<LogBlend>(&s.v)) {
    json parts = json::array();
    for (const auto& [part, w] : b->parts) parts.push_back({{"body", serialize_body(part)}, {"weight", w}});
    return {{"kind", "log_blend"}, {"parts", parts}};
  }
  if (auto* r = std::get_if<Revolution>(&s.v)) {
    if (r->info.name == "counterexample")
      return {{"kind", "revolution"}, {"profile", "counterexample"}, {"dim", n}, {"N", r->info.params.at(0)}};
    if (r->info.name == "sphere") return {{"kind", "revolution"}, {"profile", "sphere"}, {"dim", n}};
    throw InputError("serialize_body: custom revolution profiles cannot be serialized");
  }
  const auto& t = std::get<Tabulated>(s.v);
  json nodes = json::array();
  for (const Vec& v : t.grid.nodes) nodes.push_back(to_json(v));
  return {{"kind", "tabulated"}, {"dim", n},          {"nodes", nodes},
          {"weights", t.grid.weights}, {"radii", t.radii}, {"interpolate", t.interpolate}};
}

}  // namespace lzero
