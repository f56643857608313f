#include "elopt/surfaces.hpp"

#include <algorithm>
#include <limits>

namespace elopt {

namespace {

constexpr double kEndpointTolerance = 1e-12;
constexpr double kOnSurfaceTolerance = 1e-9;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::Linear:
      return "linear";
    case Shape::StrictlyConvex:
      return "strictly_convex";
    case Shape::StrictlyConcave:
      return "strictly_concave";
  }
  return "unknown";
}

std::string_view to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::Line:
      return "line";
    case CurveFamily::Quadratic:
      return "quadratic";
    case CurveFamily::Hyperbola:
      return "hyperbola";
  }
  return "unknown";
}

Shape parse_shape(std::string_view text) {
  if (text == "linear") return Shape::Linear;
  if (text == "strictly_convex" || text == "convex") return Shape::StrictlyConvex;
  if (text == "strictly_concave" || text == "concave") return Shape::StrictlyConcave;
  throw std::invalid_argument("unknown curve shape '" + std::string(text) + "'");
}

CurveFamily parse_family(std::string_view text) {
  if (text == "line") return CurveFamily::Line;
  if (text == "quadratic") return CurveFamily::Quadratic;
  if (text == "hyperbola") return CurveFamily::Hyperbola;
  throw std::invalid_argument("unknown curve family '" + std::string(text) + "'");
}

Curve2D::Curve2D(CurveFamily family, double a, double b, double param, std::optional<Shape> shape)
    : family_(family), a_(a), b_(b), param_(param), shape_(Shape::Linear) {
  if (!finite_positive(a) || !finite_positive(b)) {
    throw std::invalid_argument("curve intercepts a and b must be finite and strictly positive");
  }
  if (!std::isfinite(param)) {
    throw std::invalid_argument("curve parameter must be finite");
  }
  switch (family) {
    case CurveFamily::Line:
      param_ = 0.0;
      c1_ = -b / a;
      break;
    case CurveFamily::Quadratic:
      c1_ = -(b + param * a * a) / a;
      break;
    case CurveFamily::Hyperbola:
      if (!(param > 0.0 || param < -a)) {
        throw std::invalid_argument("hyperbola parameter s must satisfy s > 0 or s < -a");
      }
      t_ = param * b / a;
      kappa_ = param * (b + t_);
      break;
  }
  shape_ = shape.value_or(natural_shape());
}

Curve2D Curve2D::line(double a, double b) { return Curve2D(CurveFamily::Line, a, b, 0.0, Shape::Linear); }

Curve2D Curve2D::quadratic(double a, double b, double c2, std::optional<Shape> shape) {
  return Curve2D(CurveFamily::Quadratic, a, b, c2, shape);
}

Curve2D Curve2D::hyperbola(double a, double b, double s, std::optional<Shape> shape) {
  return Curve2D(CurveFamily::Hyperbola, a, b, s, shape);
}

Shape Curve2D::natural_shape() const {
  switch (family_) {
    case CurveFamily::Line:
      return Shape::Linear;
    case CurveFamily::Quadratic:
      if (param_ > 0.0) return Shape::StrictlyConvex;
      if (param_ < 0.0) return Shape::StrictlyConcave;
      return Shape::Linear;
    case CurveFamily::Hyperbola:
      return param_ > 0.0 ? Shape::StrictlyConvex : Shape::StrictlyConcave;
  }
  return Shape::Linear;
}

void Curve2D::require_x(double x) const {
  const double slack = kEndpointTolerance * std::max(1.0, a_);
  if (!(x >= -slack && x <= a_ + slack)) {
    throw std::out_of_range("curve abscissa " + std::to_string(x) + " outside [0, a]");
  }
}

double Curve2D::clamp_y(double y) const {
  const double slack = kEndpointTolerance * std::max(1.0, b_);
  if (!(y >= -slack && y <= b_ + slack)) {
    throw std::out_of_range("curve ordinate " + std::to_string(y) + " outside [0, b]");
  }
  return std::clamp(y, 0.0, b_);
}

double Curve2D::alpha_raw(double x) const {
  if (family_ == CurveFamily::Hyperbola) return kappa_ / (x + param_) - t_;
  return b_ + x * (c1_ + param_ * x);
}

double Curve2D::alpha(double x) const {
  require_x(x);
  if (x <= 0.0) return b_;
  if (x >= a_) return 0.0;
  return alpha_raw(x);
}

double Curve2D::alpha_prime(double x) const {
  require_x(x);
  x = std::clamp(x, 0.0, a_);
  if (family_ == CurveFamily::Hyperbola) {
    const double d = x + param_;
    return -kappa_ / (d * d);
  }
  return c1_ + 2.0 * param_ * x;
}

double Curve2D::alpha_second(double x) const {
  require_x(x);
  x = std::clamp(x, 0.0, a_);
  if (family_ == CurveFamily::Hyperbola) {
    const double d = x + param_;
    return 2.0 * kappa_ / (d * d * d);
  }
  return 2.0 * param_;
}

double Curve2D::beta(double y) const {
  y = clamp_y(y);
  if (y <= 0.0) return a_;
  if (y >= b_) return 0.0;
  if (family_ == CurveFamily::Hyperbola) {
    return std::clamp(kappa_ / (y + t_) - param_, 0.0, a_);
  }
  // Root of param x^2 + c1 x + (b - y) = 0 in [0, a], written in the form
  // that stays stable as param -> 0 and as y -> b.
  const double d = b_ - y;
  const double disc = std::max(0.0, c1_ * c1_ - 4.0 * param_ * d);
  return std::clamp(2.0 * d / (-c1_ + std::sqrt(disc)), 0.0, a_);
}

double Curve2D::beta_prime(double y) const { return 1.0 / alpha_prime(beta(y)); }

std::size_t dimension(const Surface& surface) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Hyperplane>) {
          return s.dimension();
        } else {
          return 2;
        }
      },
      surface);
}

std::vector<double> intercept_box(const Surface& surface) {
  if (const auto* h = std::get_if<Hyperplane>(&surface)) {
    std::vector<double> box(h->dimension());
    for (std::size_t i = 0; i < box.size(); ++i) box[i] = h->intercept(i);
    return box;
  }
  const auto& curve = std::get<Curve2D>(surface);
  return {curve.a(), curve.b()};
}

namespace {

ValidationReport validate_hyperplane(const Hyperplane& h) {
  if (h.c.empty()) throw std::invalid_argument("hyperplane needs at least one coefficient");
  if (!std::isfinite(h.M)) throw std::invalid_argument("hyperplane level M must be finite");
  for (double ci : h.c) {
    if (!std::isfinite(ci)) throw std::invalid_argument("hyperplane coefficients must be finite");
  }
  ValidationReport report;
  report.slope_min = *std::min_element(h.c.begin(), h.c.end());
  report.slope_max = *std::max_element(h.c.begin(), h.c.end());
  for (std::size_t i = 0; i < h.c.size(); ++i) {
    if (!(h.c[i] > 0.0)) {
      report.violations.push_back("coefficient c[" + std::to_string(i) + "] is not strictly positive");
    }
  }
  if (!(h.M > 0.0)) report.violations.push_back("level M is not strictly positive (surface meets 0)");
  report.valid = report.violations.empty();
  return report;
}

ValidationReport validate_curve(const Curve2D& curve) {
  ValidationReport report;
  report.shape = curve.shape();
  report.samples = kValidationSamples;
  const double a = curve.a();
  const double b = curve.b();
  const double scale = std::max(1.0, b);

  if (std::abs(curve.alpha_raw(0.0) - b) > kEndpointTolerance * scale) {
    report.violations.push_back("alpha(0) != b");
  }
  if (std::abs(curve.alpha_raw(a)) > kEndpointTolerance * scale) {
    report.violations.push_back("alpha(a) != 0");
  }

  // Closed form: -alpha' is monotone for every built-in family.
  const double slope0 = -curve.alpha_prime(0.0);
  const double slope_a = -curve.alpha_prime(a);
  double lo = std::min(slope0, slope_a);
  double hi = std::max(slope0, slope_a);

  // Dense sampling cross-check over the closed interval.
  bool interior_nonpositive = false;
  bool not_decreasing = false;
  bool shape_mismatch = false;
  double prev = curve.alpha_raw(0.0);
  const double curvature_floor = 1e-12 * std::max(1.0, std::abs(curve.alpha_second(0.0)));
  for (std::size_t k = 0; k <= kValidationSamples; ++k) {
    const double x = a * static_cast<double>(k) / static_cast<double>(kValidationSamples);
    const double slope = -curve.alpha_prime(x);
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
    if (k > 0 && k < kValidationSamples) {
      if (!(slope > 0.0)) interior_nonpositive = true;
      const double second = curve.alpha_second(x);
      switch (curve.shape()) {
        case Shape::Linear:
          if (std::abs(second) > curvature_floor) shape_mismatch = true;
          break;
        case Shape::StrictlyConvex:
          if (!(second > 0.0)) shape_mismatch = true;
          break;
        case Shape::StrictlyConcave:
          if (!(second < 0.0)) shape_mismatch = true;
          break;
      }
    }
    const double value = curve.alpha_raw(x);
    if (k > 0 && !(value < prev)) not_decreasing = true;
    prev = value;
  }
  report.slope_min = lo;
  report.slope_max = hi;

  if (interior_nonpositive || not_decreasing) {
    report.violations.push_back("alpha is not strictly decreasing on [0, a]");
  }
  if (!interior_nonpositive && std::min(slope0, slope_a) < kSlopeLowerBound) {
    report.violations.push_back("normal degenerate at endpoint");
  }
  if (hi > kSlopeUpperBound) {
    report.violations.push_back("normal degenerate: -alpha' exceeds 1e6");
  }
  if (shape_mismatch) {
    report.violations.push_back("shape flag '" + std::string(to_string(curve.shape())) +
                                "' does not match the sign of alpha''");
  }
  report.valid = report.violations.empty();
  return report;
}

}  // namespace

ValidationReport validate(const Surface& surface) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Hyperplane>) {
          return validate_hyperplane(s);
        } else {
          return validate_curve(s);
        }
      },
      surface);
}

std::vector<double> normal(const Surface& surface, std::span<const double> point) {
  if (const auto* h = std::get_if<Hyperplane>(&surface)) {
    if (point.size() != h->dimension()) throw std::invalid_argument("normal: dimension mismatch");
    double level = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (point[i] < 0.0) throw std::invalid_argument("normal: point outside the orthant");
      level += h->c[i] * point[i];
    }
    if (std::abs(level - h->M) > kOnSurfaceTolerance * std::max(1.0, h->M)) {
      throw std::invalid_argument("normal: point is not on the hyperplane");
    }
    return h->c;
  }
  const auto& curve = std::get<Curve2D>(surface);
  if (point.size() != 2) throw std::invalid_argument("normal: curves are two-dimensional");
  const double x = point[0];
  if (!(x > 0.0 && x < curve.a())) {
    throw std::invalid_argument("normal: abscissa must lie strictly inside (0, a)");
  }
  if (std::abs(point[1] - curve.alpha(x)) > kOnSurfaceTolerance) {
    throw std::invalid_argument("normal: point is not on the curve");
  }
  return {-curve.alpha_prime(x), 1.0};
}

std::optional<TPoint> t_point(const Curve2D& curve) {
  auto excess = [&](double x) { return -curve.alpha_prime(x) - 1.0; };
  const double at0 = excess(0.0);
  const double at_a = excess(curve.a());
  if (!(at0 * at_a < 0.0)) return std::nullopt;
  const double tx = bisect_root(excess, 0.0, curve.a());
  if (!(tx > 0.0 && tx < curve.a())) return std::nullopt;
  return TPoint{tx, curve.alpha(tx)};
}

}  // namespace elopt
