#include "elopt/io.hpp"

#include <cmath>
#include <string>

namespace elopt::io {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

const json& require(const json& j, std::string_view key, std::string_view where) {
  if (!j.is_object()) throw SchemaError(std::string(where) + ": expected an object");
  const auto it = j.find(std::string(key));
  if (it == j.end()) throw SchemaError(std::string(where) + ": missing key '" + std::string(key) + "'");
  return *it;
}

double get_number(const json& j, std::string_view key, std::string_view where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw SchemaError(std::string(where) + "." + std::string(key) + ": expected a number");
  return v.get<double>();
}

std::vector<double> get_numbers(const json& j, std::string_view key, std::string_view where) {
  const json& v = require(j, key, where);
  if (!v.is_array()) throw SchemaError(std::string(where) + "." + std::string(key) + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw SchemaError(std::string(where) + "." + std::string(key) + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string get_string(const json& j, std::string_view key, std::string_view where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw SchemaError(std::string(where) + "." + std::string(key) + ": expected a string");
  return v.get<std::string>();
}

json curve_json(const Curve2D& curve) {
  json params = json::object();
  switch (curve.family()) {
    case CurveFamily::Line:
      break;
    case CurveFamily::Quadratic:
      params["c2"] = curve.parameter();
      break;
    case CurveFamily::Hyperbola:
      params["s"] = curve.parameter();
      break;
  }
  return json{{"family", to_string(curve.family())},
              {"a", curve.a()},
              {"b", curve.b()},
              {"params", params},
              {"shape", to_string(curve.shape())}};
}

Curve2D curve_from_json(const json& j, std::string_view where) {
  reject_unknown_keys(j, {"family", "a", "b", "params", "shape"}, where);
  const CurveFamily family = parse_family(get_string(j, "family", where));
  const double a = get_number(j, "a", where);
  const double b = get_number(j, "b", where);
  std::optional<Shape> shape;
  if (j.contains("shape")) shape = parse_shape(get_string(j, "shape", where));
  const json params = j.value("params", json::object());
  const std::string pwhere = std::string(where) + ".params";
  switch (family) {
    case CurveFamily::Line: {
      reject_unknown_keys(params, {}, pwhere);
      Curve2D c = Curve2D::line(a, b);
      if (shape && *shape != Shape::Linear) throw SchemaError(std::string(where) + ": a line has shape linear");
      return c;
    }
    case CurveFamily::Quadratic:
      reject_unknown_keys(params, {"c2"}, pwhere);
      return Curve2D::quadratic(a, b, get_number(params, "c2", pwhere), shape);
    case CurveFamily::Hyperbola:
      reject_unknown_keys(params, {"s"}, pwhere);
      return Curve2D::hyperbola(a, b, get_number(params, "s", pwhere), shape);
  }
  throw SchemaError(std::string(where) + ": unknown family");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json witness_json(const std::vector<std::vector<double>>& points) {
  json out = json::array();
  for (const auto& p : points) out.push_back(numbers(p));
  return out;
}

ELExpr expr_from_json_at(const json& j, const std::string& where) {
  const std::string op = get_string(j, "op", where);
  if (op == "linear") {
    reject_unknown_keys(j, {"op", "c"}, where);
    return ELExpr::linear(get_numbers(j, "c", where));
  }
  if (op == "sum") {
    reject_unknown_keys(j, {"op", "left", "right"}, where);
    return ELExpr::sum(expr_from_json_at(require(j, "left", where), where + ".left"),
                       expr_from_json_at(require(j, "right", where), where + ".right"));
  }
  if (op == "scale") {
    reject_unknown_keys(j, {"op", "lambda", "inner"}, where);
    return ELExpr::scale(get_number(j, "lambda", where), expr_from_json_at(require(j, "inner", where), where + ".inner"));
  }
  if (op == "truncate_min") {
    reject_unknown_keys(j, {"op", "cap", "inner"}, where);
    return ELExpr::truncate_min(get_number(j, "cap", where),
                                expr_from_json_at(require(j, "inner", where), where + ".inner"));
  }
  if (op == "clamp") {
    reject_unknown_keys(j, {"op", "corner", "inner"}, where);
    return ELExpr::clamp(get_numbers(j, "corner", where), expr_from_json_at(require(j, "inner", where), where + ".inner"));
  }
  if (op == "convex_plateau" || op == "convex_diag" || op == "concave_step") {
    reject_unknown_keys(j, {"op", "curve"}, where);
    const Curve2D curve = curve_from_json(require(j, "curve", where), where + ".curve");
    if (op == "convex_plateau") return ELExpr::convex_plateau(curve);
    if (op == "convex_diag") return ELExpr::convex_diag(curve);
    return ELExpr::concave_step(curve);
  }
  throw SchemaError(where + ": unknown op '" + op + "'");
}

}  // namespace

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw SchemaError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw SchemaError(std::string(where) + ": unknown key '" + key + "'");
  }
}

json to_json(const Surface& surface) {
  return std::visit(Overloaded{
                        [](const Hyperplane& h) { return json{{"hyperplane", {{"c", h.c}, {"M", h.M}}}}; },
                        [](const Curve2D& c) { return json{{"curve", curve_json(c)}}; },
                    },
                    surface);
}

Surface surface_from_json(const json& j) {
  reject_unknown_keys(j, {"hyperplane", "curve"}, "surface");
  if (j.size() != 1) throw SchemaError("surface: expected exactly one of 'hyperplane' or 'curve'");
  if (j.contains("hyperplane")) {
    const json& h = j.at("hyperplane");
    reject_unknown_keys(h, {"c", "M"}, "surface.hyperplane");
    return Hyperplane{get_numbers(h, "c", "surface.hyperplane"), get_number(h, "M", "surface.hyperplane")};
  }
  return curve_from_json(j.at("curve"), "surface.curve");
}

json to_json(const ELExpr& expr) {
  return std::visit(Overloaded{
                        [](const LinearNode& n) { return json{{"op", "linear"}, {"c", n.c}}; },
                        [](const SumNode& n) {
                          return json{{"op", "sum"}, {"left", to_json(n.left)}, {"right", to_json(n.right)}};
                        },
                        [](const ScaleNode& n) {
                          return json{{"op", "scale"}, {"lambda", n.lambda}, {"inner", to_json(n.inner)}};
                        },
                        [](const TruncateMinNode& n) {
                          return json{{"op", "truncate_min"}, {"cap", n.cap}, {"inner", to_json(n.inner)}};
                        },
                        [](const ClampNode& n) {
                          return json{{"op", "clamp"}, {"corner", n.corner}, {"inner", to_json(n.inner)}};
                        },
                        [](const PiecewiseNode& n) {
                          return json{{"op", to_string(n.kind)}, {"curve", curve_json(n.curve)}};
                        },
                    },
                    expr.node().data);
}

ELExpr expr_from_json(const json& j) { return expr_from_json_at(j, "expr"); }

json to_json(const ValidationReport& r) {
  json out{{"valid", r.valid},
           {"violations", r.violations},
           {"slope_min", number(r.slope_min)},
           {"slope_max", number(r.slope_max)},
           {"samples", r.samples}};
  out["shape"] = r.shape ? json(to_string(*r.shape)) : json(nullptr);
  return out;
}

json to_json(const ELReport& r) {
  json props = json::array();
  for (const auto& p : r.properties) {
    props.push_back(json{{"name", p.name},
                         {"passed", p.passed},
                         {"worst_violation", number(p.worst_violation)},
                         {"checks", p.checks},
                         {"witness", witness_json(p.witness)}});
  }
  return json{{"passed", r.passed()},
              {"samples", r.samples},
              {"seed", r.seed},
              {"tolerance", r.tolerance},
              {"properties", props}};
}

json to_json(const FeasibilityReport& r) {
  return json{{"feasible", r.feasible},
              {"min_jump", number(r.min_jump)},
              {"witness_point", numbers(r.witness_point)},
              {"witness_coordinate", r.witness_coordinate},
              {"samples", r.samples},
              {"tolerance", r.tolerance}};
}

json to_json(const DerivativeReport& r) {
  return json{{"passed", r.passed},
              {"max_relative_error", number(r.max_relative_error)},
              {"witness_point", numbers(r.witness_point)},
              {"points_checked", r.points_checked},
              {"attempts", r.attempts},
              {"tolerance", r.tolerance}};
}

json to_json(const Theorem1Bound& b) {
  return json{{"value", number(b.value)},
              {"witness",
               {{"point", numbers(b.witness.point)},
                {"i", b.witness.i},
                {"j", b.witness.j},
                {"closure_limit", b.witness.closure_limit}}},
              {"note", b.note}};
}

json to_json(const ConstructionResult& r) {
  json out{{"kind", to_string(r.kind)},
           {"cost", number(cost(r.expr))},
           {"claimed_cost", number(r.claimed_cost)},
           {"scale_k", number(r.scale_k)},
           {"fallback", r.fallback},
           {"expr", to_json(r.expr)}};
  try {
    out["cost_total"] = number(cost_total(r.expr));
  } catch (const std::domain_error&) {
    out["cost_total"] = nullptr;
  }
  return out;
}

json to_json(const LpBound& b) {
  return json{{"m", b.m},
              {"status", to_string(b.status)},
              {"value", number(b.value)},
              {"iterations", b.iterations},
              {"method", to_string(b.method)},
              {"crossing_rows", b.crossing_rows}};
}

json to_json(const BoundReport& r) {
  json lp = json::array();
  for (const auto& b : r.lp) lp.push_back(to_json(b));
  json out{{"thm1_bound", to_json(r.thm1)},
           {"construction", to_string(r.construction)},
           {"construction_cost", number(r.construction_cost)},
           {"fallback", r.fallback},
           {"gap_construction_thm1", number(r.gap_construction_thm1)},
           {"lp", lp}};
  out["construction_cost_total"] = r.construction_cost_total ? number(*r.construction_cost_total) : json(nullptr);
  out["lp_bound"] = r.lp_bound ? number(*r.lp_bound) : json(nullptr);
  out["gap_thm1_lp"] = r.gap_thm1_lp ? number(*r.gap_thm1_lp) : json(nullptr);
  return out;
}

}  // namespace elopt::io
