#pragma once

#include <nlohmann/json.hpp>

#include "elopt/analysis.hpp"
#include "elopt/constructions.hpp"
#include "elopt/el_expr.hpp"
#include "elopt/lp_oracle.hpp"
#include "elopt/report.hpp"
#include "elopt/surfaces.hpp"

// JSON encodings. Doubles are written in shortest round-trip form, so
// decode(encode(x)) reproduces every number bit for bit.
//
// Surface:
//   {"hyperplane": {"c": [...], "M": 1}}
//   {"curve": {"family": "quadratic", "a": 1, "b": 1, "params": {"c2": 0.5}, "shape": "convex"}}
// Expression: {"op": "linear" | "sum" | "scale" | "truncate_min" | "clamp" |
//   "convex_plateau" | "convex_diag" | "concave_step", ...operands}
namespace elopt::io {

using nlohmann::json;

// Thrown for structurally invalid documents (missing or unknown keys, wrong
// types). Carries the JSON path of the offending entry.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const Surface& surface);
Surface surface_from_json(const json& j);

json to_json(const ELExpr& expr);
ELExpr expr_from_json(const json& j);

json to_json(const ValidationReport& r);
json to_json(const ELReport& r);
json to_json(const FeasibilityReport& r);
json to_json(const DerivativeReport& r);
json to_json(const Theorem1Bound& b);
json to_json(const ConstructionResult& r);
json to_json(const LpBound& b);
json to_json(const BoundReport& r);

// Keys of `j` not in `allowed` raise SchemaError naming `where`.
void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where);

}  // namespace elopt::io
