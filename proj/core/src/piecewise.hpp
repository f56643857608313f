#pragma once

#include <array>
#include <cstddef>

#include "elopt/el_expr.hpp"

namespace elopt::detail {

// Smooth pieces of the two-dimensional constructions. "Upper" and "open"
// refer to the two sides of the min{., 0} switch inside the A and B regions.
enum Branch : int {
  kPlateau = 0,
  kUpperCap = 1,   // x >= tx, y < ty, switch saturated
  kUpperOpen = 2,  // x >= tx, y < ty, switch active
  kLeftCap = 3,    // y >= ty, x < tx, switch saturated
  kLeftOpen = 4,   // y >= ty, x < tx, switch active
  kCorner = 5,     // x < tx, y < ty
};

struct PieceEval {
  double value = 0.0;
  std::array<double, 2> grad{};
  Branch branch = kPlateau;
};

Seam make_seam(PiecewiseKind kind, const Curve2D& curve);

// Region of (x, y) as seen when probing in direction (dx, dy), dx, dy in
// {-1, 0, 1}. Points within kBoundaryTolerance of a boundary are assigned to
// the side the probe moves into; a zero probe assigns them to the upper side.
Branch classify(const PiecewiseNode& node, double x, double y, int dx, int dy);

double branch_value(const PiecewiseNode& node, Branch branch, double x, double y);
std::array<double, 2> branch_grad(const PiecewiseNode& node, Branch branch, double x, double y);

PieceEval evaluate(const PiecewiseNode& node, double x, double y, int dx, int dy);

double seam_defect(const PiecewiseNode& node, std::size_t samples);

}  // namespace elopt::detail
