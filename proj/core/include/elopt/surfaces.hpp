#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace elopt {

enum class Shape { Linear, StrictlyConvex, StrictlyConcave };
enum class CurveFamily { Line, Quadratic, Hyperbola };

std::string_view to_string(Shape shape);
std::string_view to_string(CurveFamily family);
Shape parse_shape(std::string_view text);
CurveFamily parse_family(std::string_view text);

// Surface sum_i c_i x_i = M intersected with the non-negative orthant.
struct Hyperplane {
  std::vector<double> c;
  double M = 1.0;

  std::size_t dimension() const { return c.size(); }
  // Intercept of the surface with coordinate axis i.
  double intercept(std::size_t i) const { return M / c.at(i); }
};

/// A strictly decreasing analytic curve {(x, alpha(x)) : 0 <= x <= a} from
/// (0, b) to (a, 0). Only closed-form families are supported so that
/// alpha', alpha'' and the inverse beta are available pointwise.
///
/// Families:
///   Line       alpha(x) = b - (b/a) x
///   Quadratic  alpha(x) = b + c1 x + c2 x^2, with c1 fixed by alpha(a) = 0
///   Hyperbola  alpha(x) = kappa / (x + s) - t, with t = s b / a and
///              kappa = s (b + t) fixed by the two intercepts. s > 0 gives a
///              convex curve, s < -a a concave one.
///
/// Construction only rejects malformed input; mathematical defects such as a
/// non-monotone quadratic are reported by validate().
class Curve2D {
 public:
  static Curve2D line(double a, double b);
  static Curve2D quadratic(double a, double b, double c2, std::optional<Shape> shape = std::nullopt);
  static Curve2D hyperbola(double a, double b, double s, std::optional<Shape> shape = std::nullopt);

  double a() const { return a_; }
  double b() const { return b_; }
  CurveFamily family() const { return family_; }
  Shape shape() const { return shape_; }
  // Shape implied by the family parameters, independent of the declared flag.
  Shape natural_shape() const;

  // Family parameter: c2 for Quadratic, s for Hyperbola, 0 for Line.
  double parameter() const { return param_; }
  double linear_coefficient() const { return c1_; }
  double hyperbola_t() const { return t_; }
  double hyperbola_kappa() const { return kappa_; }

  // x in [0, a]; the endpoints are returned exactly (alpha(0) = b, alpha(a) = 0).
  double alpha(double x) const;
  double alpha_prime(double x) const;
  double alpha_second(double x) const;
  // alpha evaluated by the raw family formula with no endpoint snapping.
  double alpha_raw(double x) const;

  // Inverse of alpha on y in [0, b], closed form for every family.
  double beta(double y) const;
  // beta'(y) = 1 / alpha'(beta(y)).
  double beta_prime(double y) const;

  // Every built-in family has alpha'' of constant sign, so -alpha' is
  // monotone and its extremes sit at the endpoints.
  bool has_monotone_slope() const { return true; }

 private:
  Curve2D(CurveFamily family, double a, double b, double param, std::optional<Shape> shape);

  void require_x(double x) const;
  double clamp_y(double y) const;

  CurveFamily family_;
  double a_;
  double b_;
  double param_;
  double c1_ = 0.0;
  double t_ = 0.0;
  double kappa_ = 0.0;
  Shape shape_;
};

using Surface = std::variant<Hyperplane, Curve2D>;

std::size_t dimension(const Surface& surface);

// Bounding box of the surface: the axis intercepts.
std::vector<double> intercept_box(const Surface& surface);

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  // Range of -alpha' for curves; range of c_i for hyperplanes.
  double slope_min = 0.0;
  double slope_max = 0.0;
  std::optional<Shape> shape;
  std::size_t samples = 0;
};

inline constexpr double kSlopeLowerBound = 1e-6;
inline constexpr double kSlopeUpperBound = 1e6;
inline constexpr std::size_t kValidationSamples = 1024;

// Checks the s-surface conditions: positive normals with slopes inside
// [kSlopeLowerBound, kSlopeUpperBound], intercepts, monotonicity and the
// declared shape. Throws std::invalid_argument only on malformed input.
ValidationReport validate(const Surface& surface);

// Outward normal at a surface point (not normalized). For curves the point is
// (x, alpha(x)) with 0 < x < a and the normal is (-alpha'(x), 1).
std::vector<double> normal(const Surface& surface, std::span<const double> point);

struct TPoint {
  double tx = 0.0;
  double ty = 0.0;
};

// Point where the normal is proportional to (1, 1), found by bisection on
// -alpha'(x) - 1. Absent when that expression keeps one sign on (0, a).
std::optional<TPoint> t_point(const Curve2D& curve);

inline constexpr double kBisectionTolerance = 1e-12;
inline constexpr int kBisectionMaxIterations = 200;

// Bisection on a bracketing interval [lo, hi] with f(lo), f(hi) of opposite
// sign (or zero). Stops when the bracket is narrower than `tol`.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double tol = kBisectionTolerance,
                   int max_iterations = kBisectionMaxIterations) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw std::invalid_argument("bisect_root: interval does not bracket a root");
  }
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid == lo || mid == hi) return mid;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  throw std::runtime_error("bisect_root: iteration cap exceeded");
}

}  // namespace elopt
