#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elopt/el_expr.hpp"
#include "elopt/surfaces.hpp"

namespace elopt {

inline constexpr double kSuiteTolerance = 1e-7;
inline constexpr double kFeasibilityTolerance = 1e-6;
inline constexpr double kDerivativeTolerance = 1e-6;
inline constexpr std::size_t kDefaultSuiteSamples = 10000;
inline constexpr std::size_t kDefaultSurfaceSamples = 1000;
inline constexpr double kSurfaceMargin = 1e-4;

// Decreasing probe distances used for the derivative-limit checks.
inline constexpr double kLimitSteps[] = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

struct PropertyVerdict {
  std::string name;
  bool passed = true;
  double worst_violation = 0.0;
  std::vector<std::vector<double>> witness;
  std::size_t checks = 0;
};

struct ELReport {
  std::vector<PropertyVerdict> properties;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tolerance = kSuiteTolerance;

  bool passed() const;
  const PropertyVerdict& property(std::string_view name) const;
};

struct SuiteOptions {
  std::size_t samples = kDefaultSuiteSamples;
  std::uint64_t seed = 1;
  double tolerance = kSuiteTolerance;
  unsigned workers = 1;
};

/// Sampling-based check of the EL axioms and their consequences on [0, box]:
/// submodularity, diminishing returns (single-coordinate and arbitrary
/// x <= y), monotonicity, pointedness, concavity along positive directions,
/// ordering and monotonicity of one-sided derivatives, and the derivative
/// limits f_i^+(x + e e_i) -> f_i^+(x), f_i^+(x - e e_i) -> f_i^-(x).
///
/// Samples are split into fixed chunks with independent substreams, so the
/// report is identical for any worker count.
ELReport check_el(const ELExpr& expr, std::span<const double> box, const SuiteOptions& options = {});

// Any function on the orthant together with its one-sided partials. Lets the
// suite run on functions outside the expression language, e.g. to confirm it
// rejects non-EL inputs.
struct ScalarField {
  std::size_t dimension = 0;
  std::function<double(std::span<const double>)> value;
  std::function<OneSidedGrad(std::span<const double>)> partials;
};

ScalarField as_field(const ELExpr& expr);
ELReport check_el(const ScalarField& field, std::span<const double> box, const SuiteOptions& options = {});

struct FeasibilityReport {
  double min_jump = 0.0;
  std::vector<double> witness_point;
  std::size_t witness_coordinate = 0;
  std::size_t samples = 0;
  double tolerance = kFeasibilityTolerance;
  bool feasible = false;
};

// Minimum of f_i^-(x) - f_i^+(x) over sampled positive surface points kept
// kSurfaceMargin (relative) away from the boundary of the surface.
FeasibilityReport check_feasible(const ELExpr& expr, const Surface& surface,
                                 std::size_t samples = kDefaultSurfaceSamples, std::uint64_t seed = 1,
                                 double tolerance = kFeasibilityTolerance);

struct DerivativeReport {
  double max_relative_error = 0.0;
  std::vector<double> witness_point;
  std::size_t points_checked = 0;
  std::size_t attempts = 0;
  double tolerance = kDerivativeTolerance;
  bool passed = false;
};

// Compares exact one-sided partials with second-order one-sided finite
// differences at sampled points whose stencil stays inside one smooth piece.
DerivativeReport check_derivatives(const ELExpr& expr, std::span<const double> box, std::size_t points = 200,
                                   std::uint64_t seed = 1, double tolerance = kDerivativeTolerance);

// Step used by check_derivatives: 1e-5 * max(1, |x|_inf).
double finite_difference_step(std::span<const double> x);

struct BoundWitness {
  std::vector<double> point;
  std::size_t i = 0;  // denominator coordinate
  std::size_t j = 0;  // numerator coordinate
  bool closure_limit = false;
};

struct Theorem1Bound {
  double value = 0.0;
  BoundWitness witness;
  std::string note;
};

// Lower bound on the optimal cost: sup over surface points of the normal
// ratio n_j(x) / n_i(x). For curves the supremum is taken over the closure of
// S (normals are continuous), reported with the endpoint as witness.
Theorem1Bound theorem1_bound(const Surface& surface);

// Same bound for curves by dense sampling plus golden-section refinement;
// makes no monotonicity assumption on the slope.
Theorem1Bound theorem1_bound_sampled(const Curve2D& curve, std::size_t samples = 1024);

}  // namespace elopt
