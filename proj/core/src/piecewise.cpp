#include "piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elopt::detail {

namespace {

// alpha and beta continued linearly past the intercepts; only the alternate
// convex construction reaches those arguments, and there the continuation
// keeps the switch saturated.
double alpha_ext(const Curve2D& c, double x) {
  return x <= c.a() ? c.alpha(x) : c.alpha_prime(c.a()) * (x - c.a());
}
double alpha_prime_ext(const Curve2D& c, double x) { return c.alpha_prime(std::min(x, c.a())); }
double beta_ext(const Curve2D& c, double y) {
  return y <= c.b() ? c.beta(y) : c.beta_prime(c.b()) * (y - c.b());
}
double beta_prime_ext(const Curve2D& c, double y) { return c.beta_prime(std::min(y, c.b())); }

bool on_upper_side(double gap, double rate) {
  if (gap > kBoundaryTolerance) return true;
  if (gap < -kBoundaryTolerance) return false;
  return rate >= 0.0;
}

}  // namespace

Seam make_seam(PiecewiseKind kind, const Curve2D& curve) {
  const double a = curve.a();
  const double b = curve.b();
  Seam seam;
  if (const auto t = t_point(curve)) {
    seam.tx = t->tx;
    seam.ty = t->ty;
  } else {
    if (kind == PiecewiseKind::ConvexDiag) {
      throw std::invalid_argument("convex_diag needs a curve point with normal (1,1)");
    }
    seam.degenerate = true;
    // Convex: -alpha' decreases, so a shallow curve (-alpha' <= 1) puts the
    // seam at x = 0. Concave: -alpha' increases, a shallow curve puts it at x = a.
    const bool shallow = kind == PiecewiseKind::ConvexPlateau ? -curve.alpha_prime(0.0) <= 1.0
                                                              : -curve.alpha_prime(a) <= 1.0;
    const bool seam_at_origin_side = (kind == PiecewiseKind::ConvexPlateau) == shallow;
    seam.tx = seam_at_origin_side ? 0.0 : a;
    seam.ty = seam_at_origin_side ? b : 0.0;
  }
  seam.plateau = kind == PiecewiseKind::ConvexPlateau ? a - seam.tx + b - seam.ty : seam.tx + seam.ty;
  return seam;
}

Branch classify(const PiecewiseNode& node, double x, double y, int dx, int dy) {
  const Curve2D& c = node.curve;
  const bool right_of_seam = on_upper_side(x - node.seam.tx, dx);
  const bool above_seam = on_upper_side(y - node.seam.ty, dy);
  if (right_of_seam && above_seam) return kPlateau;

  // Each region's switch compares the point against S along one axis.
  const bool upper_switch_on_x =
      node.kind == PiecewiseKind::ConvexPlateau || node.kind == PiecewiseKind::ConcaveStep;
  if (right_of_seam) {
    const bool saturated = upper_switch_on_x
                               ? on_upper_side(x - beta_ext(c, y), dx - beta_prime_ext(c, y) * dy)
                               : on_upper_side(y - alpha_ext(c, x), dy - alpha_prime_ext(c, x) * dx);
    return saturated ? kUpperCap : kUpperOpen;
  }
  if (above_seam) {
    const bool saturated = upper_switch_on_x
                               ? on_upper_side(y - alpha_ext(c, x), dy - alpha_prime_ext(c, x) * dx)
                               : on_upper_side(x - beta_ext(c, y), dx - beta_prime_ext(c, y) * dy);
    return saturated ? kLeftCap : kLeftOpen;
  }
  return kCorner;
}

double branch_value(const PiecewiseNode& node, Branch branch, double x, double y) {
  const Curve2D& c = node.curve;
  const double C = node.seam.plateau;
  switch (node.kind) {
    case PiecewiseKind::ConvexPlateau:
      switch (branch) {
        case kPlateau:
        case kUpperCap:
        case kLeftCap:
          return C;
        case kUpperOpen:
          return C + x - beta_ext(c, y);
        case kLeftOpen:
          return C + y - alpha_ext(c, x);
        case kCorner:
          return c.a() - c.alpha(x) + c.b() - c.beta(y);
      }
      break;
    case PiecewiseKind::ConvexDiag:
      switch (branch) {
        case kPlateau:
        case kUpperCap:
        case kLeftCap:
          return C;
        case kUpperOpen:
          return C + y - alpha_ext(c, x);
        case kLeftOpen:
          return C + x - beta_ext(c, y);
        case kCorner:
          return x + y;
      }
      break;
    case PiecewiseKind::ConcaveStep:
      switch (branch) {
        case kPlateau:
          return C;
        case kUpperCap:
          return y + c.beta(y);
        case kLeftCap:
          return x + c.alpha(x);
        case kUpperOpen:
        case kLeftOpen:
        case kCorner:
          return x + y;
      }
      break;
  }
  throw std::logic_error("branch_value: unreachable branch");
}

std::array<double, 2> branch_grad(const PiecewiseNode& node, Branch branch, double x, double y) {
  const Curve2D& c = node.curve;
  switch (node.kind) {
    case PiecewiseKind::ConvexPlateau:
      switch (branch) {
        case kPlateau:
        case kUpperCap:
        case kLeftCap:
          return {0.0, 0.0};
        case kUpperOpen:
          return {1.0, -beta_prime_ext(c, y)};
        case kLeftOpen:
          return {-alpha_prime_ext(c, x), 1.0};
        case kCorner:
          return {-c.alpha_prime(x), -c.beta_prime(y)};
      }
      break;
    case PiecewiseKind::ConvexDiag:
      switch (branch) {
        case kPlateau:
        case kUpperCap:
        case kLeftCap:
          return {0.0, 0.0};
        case kUpperOpen:
          return {-alpha_prime_ext(c, x), 1.0};
        case kLeftOpen:
          return {1.0, -beta_prime_ext(c, y)};
        case kCorner:
          return {1.0, 1.0};
      }
      break;
    case PiecewiseKind::ConcaveStep:
      switch (branch) {
        case kPlateau:
          return {0.0, 0.0};
        case kUpperCap:
          return {0.0, 1.0 + c.beta_prime(y)};
        case kLeftCap:
          return {1.0 + c.alpha_prime(x), 0.0};
        case kUpperOpen:
        case kLeftOpen:
        case kCorner:
          return {1.0, 1.0};
      }
      break;
  }
  throw std::logic_error("branch_grad: unreachable branch");
}

PieceEval evaluate(const PiecewiseNode& node, double x, double y, int dx, int dy) {
  PieceEval out;
  out.branch = classify(node, x, y, dx, dy);
  out.value = branch_value(node, out.branch, x, y);
  out.grad = branch_grad(node, out.branch, x, y);
  return out;
}

double seam_defect(const PiecewiseNode& node, std::size_t samples) {
  const Curve2D& c = node.curve;
  const double tx = node.seam.tx;
  const double ty = node.seam.ty;
  double worst = 0.0;
  auto compare = [&](Branch p, Branch q, double x, double y) {
    worst = std::max(worst, std::abs(branch_value(node, p, x, y) - branch_value(node, q, x, y)));
  };
  const double n = static_cast<double>(samples);
  for (std::size_t k = 0; k <= samples; ++k) {
    const double u = static_cast<double>(k) / n;
    if (ty > 0.0 && tx > 0.0) {
      compare(kCorner, kUpperOpen, tx, u * ty);
      compare(kCorner, kLeftOpen, u * tx, ty);
    }
    if (tx > 0.0) compare(kLeftCap, kPlateau, tx, ty + u * c.b());
    if (ty > 0.0) compare(kUpperCap, kPlateau, tx + u * c.a(), ty);
    // S itself, where the min{., 0} switch changes sides.
    if (tx < c.a()) {
      const double x = tx + u * (c.a() - tx);
      compare(kUpperCap, kUpperOpen, x, c.alpha(x));
    }
    if (ty < c.b()) {
      const double y = ty + u * (c.b() - ty);
      compare(kLeftCap, kLeftOpen, c.beta(y), y);
    }
  }
  return worst;
}

}  // namespace elopt::detail
