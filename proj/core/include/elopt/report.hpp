#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "elopt/analysis.hpp"
#include "elopt/constructions.hpp"
#include "elopt/lp_solver.hpp"
#include "elopt/surfaces.hpp"

namespace elopt {

struct LpBound {
  std::size_t m = 0;
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  std::size_t iterations = 0;
  LpMethod method = LpMethod::Auto;
  std::size_t crossing_rows = 0;
};

// Brackets the optimal cost: lp_bound <= thm1 <= OPT <= construction_cost.
struct BoundReport {
  Theorem1Bound thm1;
  ConstructionKind construction = ConstructionKind::Linear;
  double construction_cost = 0.0;
  std::optional<double> construction_cost_total;
  bool fallback = false;
  std::vector<LpBound> lp;
  std::optional<double> lp_bound;  // best (largest) optimal value over the sweep
  double gap_construction_thm1 = 0.0;
  std::optional<double> gap_thm1_lp;
};

// One grid LP per entry of grid_m, solved on up to `workers` threads; the
// result does not depend on the worker count.
std::vector<LpBound> lp_sweep(const Surface& surface, std::span<const std::size_t> grid_m, unsigned workers = 1);

// grid_m is ignored for surfaces of dimension other than 2.
BoundReport gap_report(const Surface& surface, std::span<const std::size_t> grid_m = {}, unsigned workers = 1);

}  // namespace elopt
