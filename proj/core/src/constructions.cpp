#include "elopt/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "elopt/analysis.hpp"

namespace elopt {

namespace {

constexpr double kCostAgreement = 1e-9;

void require_valid(const Surface& surface, std::string_view who) {
  const auto report = validate(surface);
  if (!report.valid) {
    throw std::invalid_argument(std::string(who) + ": surface fails validation (" + report.violations.front() + ")");
  }
}

void require_shape(const Curve2D& curve, Shape shape, std::string_view who) {
  if (curve.shape() != shape) {
    throw std::invalid_argument(std::string(who) + ": shape mismatch, needs " + std::string(to_string(shape)) +
                                " curve, got " + std::string(to_string(curve.shape())));
  }
}

// The claimed cost comes from closed-form slopes; cost() goes through the
// derivative rules. Both must agree.
void cross_check_cost(const ConstructionResult& r) {
  const double computed = cost(r.expr);
  if (std::abs(computed - r.claimed_cost) > kCostAgreement * std::max(1.0, r.claimed_cost)) {
    throw std::logic_error(std::string(to_string(r.kind)) + ": cost(expr) = " + std::to_string(computed) +
                           " disagrees with claimed cost " + std::to_string(r.claimed_cost));
  }
}

const Seam& seam_of(const ELExpr& construction) {
  return std::get<PiecewiseNode>(construction.node().data).seam;
}

void verify_fallback(const ConstructionResult& r, const Curve2D& curve) {
  const std::vector<double> box{1.5 * curve.a(), 1.5 * curve.b()};
  const ELReport suite = check_el(r.expr, box);
  if (!suite.passed()) {
    throw std::runtime_error(std::string(to_string(r.kind)) + ": single-branch fallback fails the EL suite");
  }
  const FeasibilityReport feas = check_feasible(r.expr, Surface{curve});
  if (!feas.feasible) {
    throw std::runtime_error(std::string(to_string(r.kind)) + ": single-branch fallback is not feasible (min jump " +
                             std::to_string(feas.min_jump) + ")");
  }
}

}  // namespace

std::string_view to_string(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::Linear:
      return "linear";
    case ConstructionKind::ConvexPlateau:
      return "convex_plateau";
    case ConstructionKind::ConvexDiag:
      return "convex_diag";
    case ConstructionKind::ConcaveStep:
      return "concave";
  }
  return "unknown";
}

ConstructionKind parse_construction_kind(std::string_view text) {
  if (text == "linear") return ConstructionKind::Linear;
  if (text == "convex_plateau") return ConstructionKind::ConvexPlateau;
  if (text == "convex_diag") return ConstructionKind::ConvexDiag;
  if (text == "concave" || text == "concave_step") return ConstructionKind::ConcaveStep;
  throw std::invalid_argument("unknown construction '" + std::string(text) + "'");
}

ConstructionResult linear_opt(const Hyperplane& h) {
  require_valid(h, "linear_opt");
  const double lo = *std::min_element(h.c.begin(), h.c.end());
  const double hi = *std::max_element(h.c.begin(), h.c.end());
  const double k = 1.0 / lo;
  ConstructionResult r{ELExpr::scale(k, ELExpr::truncate_min(h.M, ELExpr::linear(h.c))), hi / lo, k,
                       ConstructionKind::Linear};
  cross_check_cost(r);
  return r;
}

ConstructionResult convex_plateau(const Curve2D& curve) {
  require_shape(curve, Shape::StrictlyConvex, "convex_plateau");
  require_valid(curve, "convex_plateau");
  ELExpr expr = ELExpr::convex_plateau(curve);
  const double claimed = std::max(-curve.alpha_prime(0.0), -curve.beta_prime(0.0));
  ConstructionResult r{expr, claimed, 1.0, ConstructionKind::ConvexPlateau, seam_of(expr).degenerate};
  cross_check_cost(r);
  if (r.fallback) verify_fallback(r, curve);
  return r;
}

ConstructionResult convex_diag(const Curve2D& curve) {
  require_shape(curve, Shape::StrictlyConvex, "convex_diag");
  require_valid(curve, "convex_diag");
  if (!t_point(curve)) throw std::invalid_argument("convex_diag: curve has no point with normal (1,1)");
  const double k = std::min(-curve.alpha_prime(curve.a()), -curve.beta_prime(curve.b()));
  ConstructionResult r{ELExpr::scale(1.0 / k, ELExpr::convex_diag(curve)), 1.0 / k, 1.0 / k,
                       ConstructionKind::ConvexDiag};
  cross_check_cost(r);
  return r;
}

ConstructionResult concave_construct(const Curve2D& curve) {
  require_shape(curve, Shape::StrictlyConcave, "concave_construct");
  require_valid(curve, "concave_construct");
  const ELExpr step = ELExpr::concave_step(curve);
  const double k = 1.0 / std::min(-curve.alpha_prime(0.0), -curve.beta_prime(0.0));
  ConstructionResult r{ELExpr::scale(k, step), k, k, ConstructionKind::ConcaveStep, seam_of(step).degenerate};
  cross_check_cost(r);
  if (r.fallback) verify_fallback(r, curve);
  return r;
}

Hyperplane as_hyperplane(const Curve2D& line) {
  if (line.shape() != Shape::Linear) throw std::invalid_argument("as_hyperplane: curve is not a line");
  return Hyperplane{{1.0 / line.a(), 1.0 / line.b()}, 1.0};
}

ConstructionResult construct_for(const Surface& surface) {
  if (const auto* h = std::get_if<Hyperplane>(&surface)) return linear_opt(*h);
  const auto& curve = std::get<Curve2D>(surface);
  switch (curve.shape()) {
    case Shape::Linear:
      require_valid(curve, "construct_for");
      return linear_opt(as_hyperplane(curve));
    case Shape::StrictlyConvex:
      return convex_plateau(curve);
    case Shape::StrictlyConcave:
      return concave_construct(curve);
  }
  throw std::logic_error("construct_for: unknown shape");
}

}  // namespace elopt
