#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elopt/el_expr.hpp"
#include "elopt/lp_solver.hpp"
#include "elopt/surfaces.hpp"

namespace elopt {

enum class GridRowKind { Pointed, Monotone, Submodular, Concavity, Crossing, Objective };

std::string_view to_string(GridRowKind kind);

inline constexpr std::size_t kMinGrid = 4;
inline constexpr std::size_t kMaxGrid = 96;

/// Grid discretization of the optimal-cost problem on a 2-D surface.
///
/// Variables are f(i, j) at nodes (i h_x, j h_y), 0 <= i, j <= m, followed by
/// the objective scalar t. Any feasible EL function restricted to the grid,
/// with t = max(f(h_x, 0)/h_x, f(0, h_y)/h_y), satisfies every row, so the LP
/// optimum is a lower bound on the optimal cost.
///
/// Crossing rows: where a grid line in direction d meets the curve at c with
/// k h_d <= c <= (k+1) h_d, concavity along the line bounds the derivative
/// jump at c by the difference of the quotients over cells [k-1, k] and
/// [k+1, k+2], giving [f(k) - f(k-1)] - [f(k+2) - f(k+1)] >= h_d.
struct GridLP {
  std::size_t m = 0;
  double X = 0.0;
  double Y = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  LinearProgram program;
  std::vector<GridRowKind> kinds;
  std::vector<std::string> names;
  std::size_t crossing_rows = 0;
  std::vector<std::string> warnings;

  std::size_t nodes_per_axis() const { return m + 1; }
  std::size_t var(std::size_t i, std::size_t j) const { return i * (m + 1) + j; }
  std::size_t t_var() const { return (m + 1) * (m + 1); }
};

// Accepts a Curve2D or a 2-D Hyperplane (treated as the line through its
// intercepts). Throws std::invalid_argument for m outside [4, 96], invalid
// surfaces or hyperplanes of other dimensions.
GridLP build_lp(const Surface& surface, std::size_t m);

// Dense simplex for small grids, interior point for larger ones (see solve()).
LpSolution solve_lp(const GridLP& lp, LpMethod method = LpMethod::Auto);

// Assignment obtained by sampling expr at the grid nodes, with t set to the
// smallest value its objective rows allow.
std::vector<double> restrict_to_grid(const ELExpr& expr, const GridLP& lp);

// Largest row violation of an assignment and the name of that row.
struct RowCheck {
  double max_violation = 0.0;
  std::string worst_row;
};
RowCheck check_assignment(const GridLP& lp, std::span<const double> assignment);

// CPLEX LP text format; readable by most external solvers.
void write_lp_format(const GridLP& lp, std::ostream& out);

}  // namespace elopt
