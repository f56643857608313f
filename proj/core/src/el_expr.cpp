#include "elopt/el_expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "piecewise.hpp"

namespace elopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_point(const ELExpr& expr, std::span<const double> x) {
  if (x.size() != expr.dimension()) {
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", expression expects " +
                                std::to_string(expr.dimension()));
  }
  for (double xi : x) {
    if (!std::isfinite(xi) || xi < 0.0) {
      throw std::invalid_argument("point lies outside the non-negative orthant");
    }
  }
}

PiecewiseNode make_piecewise(PiecewiseKind kind, Curve2D curve) {
  const Shape required = kind == PiecewiseKind::ConcaveStep ? Shape::StrictlyConcave : Shape::StrictlyConvex;
  if (curve.shape() != required) {
    throw std::invalid_argument(std::string(to_string(kind)) + " needs a " + std::string(to_string(required)) +
                                " curve, got " + std::string(to_string(curve.shape())));
  }
  const auto report = validate(curve);
  if (!report.valid) {
    throw std::invalid_argument(std::string(to_string(kind)) + ": curve fails validation (" +
                                report.violations.front() + ")");
  }
  PiecewiseNode node{kind, curve, detail::make_seam(kind, curve)};
  const double defect = detail::seam_defect(node, 64);
  if (defect > 1e-9 * std::max(1.0, node.seam.plateau)) {
    throw std::logic_error(std::string(to_string(kind)) + ": branch formulas disagree on a seam by " +
                           std::to_string(defect));
  }
  return node;
}

double eval_node(const ELExpr& expr, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [&](const LinearNode& n) {
            double v = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) v += n.c[i] * x[i];
            return v;
          },
          [&](const SumNode& n) { return eval_node(n.left, x) + eval_node(n.right, x); },
          [&](const ScaleNode& n) { return n.lambda == 0.0 ? 0.0 : n.lambda * eval_node(n.inner, x); },
          [&](const TruncateMinNode& n) { return std::min(eval_node(n.inner, x), n.cap); },
          [&](const ClampNode& n) {
            std::vector<double> z(x.begin(), x.end());
            for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::min(z[i], n.corner[i]);
            return eval_node(n.inner, z);
          },
          [&](const PiecewiseNode& n) { return detail::evaluate(n, x[0], x[1], 0, 0).value; },
      },
      expr.node().data);
}

// Relative position of v against a threshold: -1 below, 0 on it, +1 above.
int side_of(double v, double threshold) {
  const double tie = kBoundaryTolerance * std::max(1.0, std::abs(threshold));
  if (v < threshold - tie) return -1;
  if (v > threshold + tie) return 1;
  return 0;
}

struct Partials {
  std::vector<double> left;
  std::vector<double> right;
};

Partials partials_node(const ELExpr& expr, std::span<const double> x) {
  const std::size_t n = x.size();
  return std::visit(
      Overloaded{
          [&](const LinearNode& node) { return Partials{node.c, node.c}; },
          [&](const SumNode& node) {
            Partials l = partials_node(node.left, x);
            const Partials r = partials_node(node.right, x);
            for (std::size_t i = 0; i < n; ++i) {
              l.left[i] += r.left[i];
              l.right[i] += r.right[i];
            }
            return l;
          },
          [&](const ScaleNode& node) {
            if (node.lambda == 0.0) return Partials{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
            Partials p = partials_node(node.inner, x);
            for (std::size_t i = 0; i < n; ++i) {
              p.left[i] *= node.lambda;
              p.right[i] *= node.lambda;
            }
            return p;
          },
          [&](const TruncateMinNode& node) {
            const int side = side_of(eval_node(node.inner, x), node.cap);
            if (side > 0) return Partials{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
            Partials p = partials_node(node.inner, x);
            if (side == 0) std::fill(p.right.begin(), p.right.end(), 0.0);
            return p;
          },
          [&](const ClampNode& node) {
            std::vector<double> z(x.begin(), x.end());
            for (std::size_t i = 0; i < n; ++i) z[i] = std::min(z[i], node.corner[i]);
            Partials p = partials_node(node.inner, z);
            for (std::size_t i = 0; i < n; ++i) {
              const int side = side_of(x[i], node.corner[i]);
              if (side > 0) {
                p.left[i] = 0.0;
                p.right[i] = 0.0;
              } else if (side == 0) {
                p.right[i] = 0.0;
              }
            }
            return p;
          },
          [&](const PiecewiseNode& node) {
            Partials p{std::vector<double>(2, kNaN), std::vector<double>(2, 0.0)};
            for (int i = 0; i < 2; ++i) {
              const int dx = i == 0 ? 1 : 0;
              const int dy = i == 1 ? 1 : 0;
              p.right[i] = detail::evaluate(node, x[0], x[1], dx, dy).grad[i];
              if (x[i] > 0.0) p.left[i] = detail::evaluate(node, x[0], x[1], -dx, -dy).grad[i];
            }
            return p;
          },
      },
      expr.node().data);
}

std::optional<double> range_sup(const ELExpr& expr) {
  return std::visit(
      Overloaded{
          [&](const LinearNode&) -> std::optional<double> { return std::nullopt; },
          [&](const SumNode& node) -> std::optional<double> {
            const auto l = range_sup(node.left);
            const auto r = range_sup(node.right);
            if (!l || !r) return std::nullopt;
            return *l + *r;
          },
          [&](const ScaleNode& node) -> std::optional<double> {
            if (node.lambda == 0.0) return 0.0;
            const auto inner = range_sup(node.inner);
            if (!inner) return std::nullopt;
            return node.lambda * *inner;
          },
          [&](const TruncateMinNode& node) -> std::optional<double> {
            const auto inner = range_sup(node.inner);
            return inner ? std::min(*inner, node.cap) : node.cap;
          },
          [&](const ClampNode& node) -> std::optional<double> { return eval_node(node.inner, node.corner); },
          [&](const PiecewiseNode& node) -> std::optional<double> { return node.seam.plateau; },
      },
      expr.node().data);
}

void signature_node(const ELExpr& expr, std::span<const double> x, std::vector<int>& out) {
  std::visit(Overloaded{
                 [&](const LinearNode&) {},
                 [&](const SumNode& node) {
                   signature_node(node.left, x, out);
                   signature_node(node.right, x, out);
                 },
                 [&](const ScaleNode& node) { signature_node(node.inner, x, out); },
                 [&](const TruncateMinNode& node) {
                   out.push_back(side_of(eval_node(node.inner, x), node.cap));
                   signature_node(node.inner, x, out);
                 },
                 [&](const ClampNode& node) {
                   std::vector<double> z(x.begin(), x.end());
                   for (std::size_t i = 0; i < z.size(); ++i) {
                     out.push_back(side_of(x[i], node.corner[i]));
                     z[i] = std::min(z[i], node.corner[i]);
                   }
                   signature_node(node.inner, z, out);
                 },
                 [&](const PiecewiseNode& node) { out.push_back(detail::classify(node, x[0], x[1], 0, 0)); },
             },
             expr.node().data);
}

double seam_defect_node(const ELExpr& expr, std::size_t samples) {
  return std::visit(Overloaded{
                        [&](const LinearNode&) { return 0.0; },
                        [&](const SumNode& node) {
                          return std::max(seam_defect_node(node.left, samples),
                                          seam_defect_node(node.right, samples));
                        },
                        [&](const ScaleNode& node) { return seam_defect_node(node.inner, samples); },
                        [&](const TruncateMinNode& node) { return seam_defect_node(node.inner, samples); },
                        [&](const ClampNode& node) { return seam_defect_node(node.inner, samples); },
                        [&](const PiecewiseNode& node) { return detail::seam_defect(node, samples); },
                    },
                    expr.node().data);
}

}  // namespace

std::string_view to_string(PiecewiseKind kind) {
  switch (kind) {
    case PiecewiseKind::ConvexPlateau:
      return "convex_plateau";
    case PiecewiseKind::ConvexDiag:
      return "convex_diag";
    case PiecewiseKind::ConcaveStep:
      return "concave_step";
  }
  return "unknown";
}

ELExpr ELExpr::linear(std::vector<double> c) {
  if (c.empty()) throw std::invalid_argument("linear: empty coefficient vector");
  for (double ci : c) {
    if (!std::isfinite(ci) || !(ci > 0.0)) throw std::invalid_argument("linear: coefficients must be positive");
  }
  const std::size_t dim = c.size();
  return ELExpr(std::make_shared<const Node>(Node{LinearNode{std::move(c)}}), dim);
}

ELExpr ELExpr::sum(ELExpr left, ELExpr right) {
  if (left.dimension() != right.dimension()) throw std::invalid_argument("sum: dimension mismatch");
  const std::size_t dim = left.dimension();
  return ELExpr(std::make_shared<const Node>(Node{SumNode{std::move(left), std::move(right)}}), dim);
}

ELExpr ELExpr::scale(double lambda, ELExpr inner) {
  if (!std::isfinite(lambda) || lambda < 0.0) throw std::invalid_argument("scale: factor must be finite and >= 0");
  const std::size_t dim = inner.dimension();
  return ELExpr(std::make_shared<const Node>(Node{ScaleNode{lambda, std::move(inner)}}), dim);
}

ELExpr ELExpr::truncate_min(double cap, ELExpr inner) {
  if (!std::isfinite(cap) || cap < 0.0) throw std::invalid_argument("truncate_min: cap must be finite and >= 0");
  const std::size_t dim = inner.dimension();
  return ELExpr(std::make_shared<const Node>(Node{TruncateMinNode{cap, std::move(inner)}}), dim);
}

ELExpr ELExpr::clamp(std::vector<double> corner, ELExpr inner) {
  if (corner.size() != inner.dimension()) throw std::invalid_argument("clamp: dimension mismatch");
  for (double ai : corner) {
    if (!std::isfinite(ai) || !(ai > 0.0)) throw std::invalid_argument("clamp: corner must be strictly positive");
  }
  const std::size_t dim = inner.dimension();
  return ELExpr(std::make_shared<const Node>(Node{ClampNode{std::move(corner), std::move(inner)}}), dim);
}

ELExpr ELExpr::convex_plateau(Curve2D curve) {
  return ELExpr(std::make_shared<const Node>(Node{make_piecewise(PiecewiseKind::ConvexPlateau, std::move(curve))}),
                2);
}

ELExpr ELExpr::convex_diag(Curve2D curve) {
  return ELExpr(std::make_shared<const Node>(Node{make_piecewise(PiecewiseKind::ConvexDiag, std::move(curve))}), 2);
}

ELExpr ELExpr::concave_step(Curve2D curve) {
  return ELExpr(std::make_shared<const Node>(Node{make_piecewise(PiecewiseKind::ConcaveStep, std::move(curve))}),
                2);
}

double eval(const ELExpr& expr, std::span<const double> x) {
  require_point(expr, x);
  return eval_node(expr, x);
}

OneSidedGrad one_sided_partials(const ELExpr& expr, std::span<const double> x) {
  require_point(expr, x);
  Partials p = partials_node(expr, x);
  OneSidedGrad grad;
  grad.defined_left.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    grad.defined_left[i] = x[i] > 0.0;
    if (!grad.defined_left[i]) p.left[i] = kNaN;
  }
  grad.left = std::move(p.left);
  grad.right = std::move(p.right);
  return grad;
}

double cost(const ELExpr& expr) {
  const std::vector<double> origin(expr.dimension(), 0.0);
  const auto grad = one_sided_partials(expr, origin);
  return *std::max_element(grad.right.begin(), grad.right.end());
}

double cost_total(const ELExpr& expr) {
  const auto sup = range_sup(expr);
  if (!sup) throw std::domain_error("cost_total undefined for unbounded EL function");
  return *sup;
}

std::vector<int> branch_signature(const ELExpr& expr, std::span<const double> x) {
  require_point(expr, x);
  std::vector<int> out;
  signature_node(expr, x, out);
  return out;
}

double seam_continuity_defect(const ELExpr& expr, std::size_t samples_per_seam) {
  return seam_defect_node(expr, std::max<std::size_t>(1, samples_per_seam));
}

}  // namespace elopt
