#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "elopt/surfaces.hpp"

namespace elopt {

using Point = std::vector<double>;

struct Node;

enum class PiecewiseKind { ConvexPlateau, ConvexDiag, ConcaveStep };

std::string_view to_string(PiecewiseKind kind);

/// Immutable expression tree of entropy-like (EL) functions: pointed,
/// non-decreasing, submodular functions on the non-negative orthant with the
/// diminishing-returns property. Atoms are positive linear forms and the three
/// two-dimensional piecewise constructions; combinators are the operations
/// under which the EL class is closed (non-negative scaling and sums,
/// truncation from above, clamping of the argument).
///
/// Copies share the underlying tree; evaluation is pure and thread-safe.
class ELExpr {
 public:
  static ELExpr linear(std::vector<double> c);
  static ELExpr sum(ELExpr left, ELExpr right);
  static ELExpr scale(double lambda, ELExpr inner);
  static ELExpr truncate_min(double cap, ELExpr inner);
  static ELExpr clamp(std::vector<double> corner, ELExpr inner);
  static ELExpr convex_plateau(Curve2D curve);
  static ELExpr convex_diag(Curve2D curve);
  static ELExpr concave_step(Curve2D curve);

  std::size_t dimension() const { return dimension_; }
  const Node& node() const { return *node_; }

 private:
  ELExpr(std::shared_ptr<const Node> node, std::size_t dimension)
      : node_(std::move(node)), dimension_(dimension) {}

  std::shared_ptr<const Node> node_;
  std::size_t dimension_;
};

struct LinearNode {
  std::vector<double> c;
};

struct SumNode {
  ELExpr left;
  ELExpr right;
};

struct ScaleNode {
  double lambda;
  ELExpr inner;
};

struct TruncateMinNode {
  double cap;
  ELExpr inner;
};

struct ClampNode {
  std::vector<double> corner;
  ELExpr inner;
};

// Seam of a two-dimensional construction. For curves whose normal never
// equals (1,1) the seam is moved to the endpoint that leaves only a single
// branch of the piecewise formula active; `degenerate` records that.
struct Seam {
  double tx = 0.0;
  double ty = 0.0;
  double plateau = 0.0;
  bool degenerate = false;
};

struct PiecewiseNode {
  PiecewiseKind kind;
  Curve2D curve;
  Seam seam;
};

struct Node {
  std::variant<LinearNode, SumNode, ScaleNode, TruncateMinNode, ClampNode, PiecewiseNode> data;
};

// Per-coordinate one-sided partial derivatives. left[i] is only meaningful
// where defined_left[i] is true (x_i > 0); elsewhere it holds NaN.
struct OneSidedGrad {
  std::vector<double> left;
  std::vector<double> right;
  std::vector<bool> defined_left;
};

// Absolute tolerance used to decide that a point sits on a branch boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

double eval(const ELExpr& expr, std::span<const double> x);

// Exact one-sided partials by propagation through the tree. On branch
// boundaries the left value is the limit from the lower side and the right
// value the limit from the upper side.
OneSidedGrad one_sided_partials(const ELExpr& expr, std::span<const double> x);

// max_i f_i^+(0).
double cost(const ELExpr& expr);

// sup of the range. Throws std::domain_error for unbounded expressions.
double cost_total(const ELExpr& expr);

// Identifies which smooth piece of every node is active at x; two points with
// equal signatures lie in the same smooth region of the expression.
std::vector<int> branch_signature(const ELExpr& expr, std::span<const double> x);

// Largest disagreement between adjacent branch formulas along the seams of
// every piecewise node in the tree (zero when there are none).
double seam_continuity_defect(const ELExpr& expr, std::size_t samples_per_seam = 64);

}  // namespace elopt
