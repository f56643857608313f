#pragma once

#include <string_view>

#include "elopt/el_expr.hpp"
#include "elopt/surfaces.hpp"

namespace elopt {

enum class ConstructionKind { Linear, ConvexPlateau, ConvexDiag, ConcaveStep };

std::string_view to_string(ConstructionKind kind);
ConstructionKind parse_construction_kind(std::string_view text);

struct ConstructionResult {
  ELExpr expr;
  double claimed_cost = 0.0;
  double scale_k = 1.0;
  ConstructionKind kind = ConstructionKind::Linear;
  // True when the curve has no (1,1) normal and the single-branch form was
  // used; such results have been verified by the property suite.
  bool fallback = false;
};

// Optimal function for a hyperplane: (1/min c) * min{<c, y>, M}, cost max c / min c.
ConstructionResult linear_opt(const Hyperplane& h);

// Plateau construction for a strictly convex curve; unscaled, with cost
// max{-alpha'(0), -beta'(0)}.
ConstructionResult convex_plateau(const Curve2D& curve);

// Alternate convex construction x + y below the seam, scaled by 1/k with
// k = min{-alpha'(a), -beta'(b)}. Needs a T-point.
ConstructionResult convex_diag(const Curve2D& curve);

// Construction for a strictly concave curve, scaled by
// k = 1 / min{-alpha'(0), -beta'(0)}.
ConstructionResult concave_construct(const Curve2D& curve);

// Shape-matching optimal construction: linear_opt for hyperplanes and lines,
// convex_plateau for convex curves, concave_construct for concave ones.
ConstructionResult construct_for(const Surface& surface);

// Line curve x/a + y/b = 1 as a hyperplane.
Hyperplane as_hyperplane(const Curve2D& line);

}  // namespace elopt
