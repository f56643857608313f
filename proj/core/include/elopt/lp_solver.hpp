#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace elopt {

enum class RowSense { GreaterEqual, Equal };

struct LpRow {
  std::vector<std::pair<std::size_t, double>> terms;
  RowSense sense = RowSense::GreaterEqual;
  double rhs = 0.0;
};

// minimize objective . x  subject to rows, x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpMethod { Auto, DenseSimplex, InteriorPoint };

std::string_view to_string(LpStatus status);
std::string_view to_string(LpMethod method);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
  LpMethod method = LpMethod::Auto;
  // Final basis (column indices in the slack-augmented standard form); only
  // filled by the simplex method.
  std::vector<std::size_t> basis;
};

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 200000;
};

struct InteriorPointOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 200;
};

// Two-phase dense tableau simplex. Dantzig pricing, falling back to Bland's
// rule during runs of degenerate pivots, so it cannot cycle. Throws LpError
// when the iteration cap is reached.
LpSolution solve_dense_simplex(const LinearProgram& lp, const SimplexOptions& options = {});

// Mehrotra predictor-corrector primal-dual interior-point method on the
// normal equations, factored with a sparse LDL^T. Equality rows must be
// singletons (they fix a variable and are presolved away). Throws LpError when
// the iteration cap is reached.
LpSolution solve_interior_point(const LinearProgram& lp, const InteriorPointOptions& options = {});

// Problems up to kDenseSimplexLimit variables go to the dense simplex,
// larger ones to the interior-point method.
inline constexpr std::size_t kDenseSimplexLimit = 200;
LpSolution solve(const LinearProgram& lp, LpMethod method = LpMethod::Auto);

// Largest violation of any row or of x >= 0.
double max_violation(const LinearProgram& lp, std::span<const double> x);

}  // namespace elopt
