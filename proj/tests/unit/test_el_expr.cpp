#include <gtest/gtest.h>

#include <cmath>

#include "elopt/el_expr.hpp"
#include "elopt/sampling.hpp"

using namespace elopt;

namespace {

Curve2D qc() { return Curve2D::quadratic(1.0, 1.0, 0.5); }
Curve2D qcc() { return Curve2D::quadratic(1.0, 1.0, -0.5); }

double at(const ELExpr& e, double x, double y) {
  const double p[2] = {x, y};
  return eval(e, p);
}

OneSidedGrad grad_at(const ELExpr& e, double x, double y) {
  const double p[2] = {x, y};
  return one_sided_partials(e, p);
}

}  // namespace

TEST(ELExpr, TruncatedLinearBelowCap) {
  const auto f = ELExpr::truncate_min(1.0, ELExpr::linear({1.0, 2.0}));
  EXPECT_DOUBLE_EQ(at(f, 0.25, 0.25), 0.75);
  EXPECT_DOUBLE_EQ(at(f, 1.0, 1.0), 1.0);
}

TEST(ELExpr, ConvexPlateauValues) {
  const auto f = ELExpr::convex_plateau(qc());
  // C = a + b - tx - ty with T = (0.5, 0.375).
  EXPECT_NEAR(at(f, 0.5, 0.375), 2.0 - 0.5 - 0.375, 1e-12);
  EXPECT_EQ(at(f, 0.0, 0.0), 0.0);
  EXPECT_NEAR(at(f, 5.0, 5.0), 1.125, 1e-12);
}

TEST(ELExpr, ConcaveStepPlateau) {
  const auto f = ELExpr::concave_step(qcc());
  EXPECT_NEAR(at(f, 0.5, 0.625), 1.125, 1e-12);
  EXPECT_EQ(at(f, 0.0, 0.0), 0.0);
}

TEST(ELExpr, TruncationKink) {
  const auto f = ELExpr::truncate_min(1.0, ELExpr::linear({1.0}));
  const double x[1] = {1.0};
  const auto g = one_sided_partials(f, x);
  EXPECT_EQ(g.left[0], 1.0);
  EXPECT_EQ(g.right[0], 0.0);
}

TEST(ELExpr, LeftPartialUndefinedOnBoundary) {
  const auto f = ELExpr::linear({1.0, 2.0});
  const auto g = grad_at(f, 0.0, 1.0);
  EXPECT_FALSE(g.defined_left[0]);
  EXPECT_TRUE(std::isnan(g.left[0]));
  EXPECT_TRUE(g.defined_left[1]);
  EXPECT_EQ(g.left[1], 2.0);
}

TEST(ELExpr, ConvexPlateauPartialsAtOrigin) {
  const auto g = grad_at(ELExpr::convex_plateau(qc()), 0.0, 0.0);
  EXPECT_NEAR(g.right[0], 1.5, 1e-12);
  EXPECT_NEAR(g.right[1], 2.0, 1e-12);
}

TEST(ELExpr, ConcaveStepPartialsOnSurface) {
  const Curve2D c = qcc();
  const double x = 0.75;
  const double y = c.alpha(x);
  ASSERT_NEAR(y, 0.34375, 1e-15);
  const auto g = grad_at(ELExpr::concave_step(c), x, y);
  EXPECT_NEAR(g.left[0], 1.0, 1e-12);
  EXPECT_NEAR(g.right[0], 0.0, 1e-12);
  EXPECT_NEAR(g.left[1], 1.0, 1e-12);
  // 1 + beta'(y) with beta'(y) = 1/alpha'(0.75) = -0.8.
  EXPECT_NEAR(g.right[1], 0.2, 1e-12);
}

TEST(ELExpr, Costs) {
  EXPECT_DOUBLE_EQ(cost(ELExpr::truncate_min(1.0, ELExpr::linear({1.0, 2.0}))), 2.0);
  const auto sym = ELExpr::linear({3.0, 3.0, 3.0});
  EXPECT_DOUBLE_EQ(cost(sym), 3.0);
  EXPECT_DOUBLE_EQ(cost(ELExpr::scale(1.0 / 3.0, sym)), 1.0);
  EXPECT_NEAR(cost(ELExpr::convex_plateau(qc())), 2.0, 1e-12);
}

TEST(ELExpr, CostTotal) {
  EXPECT_NEAR(cost_total(ELExpr::convex_plateau(qc())), 1.125, 1e-12);
  EXPECT_DOUBLE_EQ(cost_total(ELExpr::truncate_min(5.0, ELExpr::linear({1.0, 1.0}))), 5.0);
  EXPECT_NEAR(cost_total(ELExpr::scale(2.0, ELExpr::concave_step(qcc()))), 2.25, 1e-12);
  EXPECT_THROW(cost_total(ELExpr::linear({1.0, 1.0})), std::domain_error);
  EXPECT_EQ(cost_total(ELExpr::scale(0.0, ELExpr::linear({1.0}))), 0.0);
}

TEST(ELExpr, CostTotalMatchesLargePoint) {
  const auto f = ELExpr::sum(ELExpr::convex_plateau(qc()), ELExpr::truncate_min(2.0, ELExpr::linear({1.0, 1.0})));
  EXPECT_NEAR(cost_total(f), at(f, 100.0, 100.0), 1e-12);
}

TEST(ELExpr, ClampFreezesCoordinates) {
  const auto f = ELExpr::clamp({0.5, 2.0}, ELExpr::linear({1.0, 1.0}));
  EXPECT_DOUBLE_EQ(at(f, 3.0, 1.0), 1.5);
  const auto g = grad_at(f, 0.5, 1.0);
  EXPECT_EQ(g.left[0], 1.0);
  EXPECT_EQ(g.right[0], 0.0);
  EXPECT_NEAR(cost_total(f), 2.5, 1e-15);
}

TEST(ELExpr, RejectsBadInput) {
  EXPECT_THROW(ELExpr::linear({1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(ELExpr::scale(-1.0, ELExpr::linear({1.0})), std::invalid_argument);
  EXPECT_THROW(ELExpr::sum(ELExpr::linear({1.0}), ELExpr::linear({1.0, 1.0})), std::invalid_argument);
  EXPECT_THROW(ELExpr::convex_plateau(qcc()), std::invalid_argument);
  EXPECT_THROW(ELExpr::concave_step(Curve2D::line(1.0, 1.0)), std::invalid_argument);
  const auto f = ELExpr::linear({1.0, 1.0});
  EXPECT_THROW(at(f, -1.0, 0.0), std::invalid_argument);
  const double one[1] = {1.0};
  EXPECT_THROW(eval(f, one), std::invalid_argument);
}

TEST(ELExpr, ConvexDiagNeedsTPoint) {
  EXPECT_THROW(ELExpr::convex_diag(Curve2D::quadratic(1.0, 2.5, 0.5)), std::invalid_argument);
}

TEST(ELExpr, SeamsAreContinuous) {
  for (const auto& f : {ELExpr::convex_plateau(qc()), ELExpr::convex_diag(qc()), ELExpr::concave_step(qcc()),
                        ELExpr::convex_plateau(Curve2D::hyperbola(2.0, 1.0, 0.3)),
                        ELExpr::concave_step(Curve2D::hyperbola(1.0, 1.5, -2.5))}) {
    EXPECT_LT(seam_continuity_defect(f), 1e-12);
  }
}

// Away from branch boundaries the function is continuous: a tiny step
// changes the value by at most the step times the largest partial.
TEST(ELExpr, ContinuityAcrossBranches) {
  const auto f = ELExpr::concave_step(qcc());
  SampleStream rng(3, 0);
  for (int k = 0; k < 2000; ++k) {
    const double x = rng.uniform(0.0, 1.5);
    const double y = rng.uniform(0.0, 1.5);
    const double h = 1e-9;
    EXPECT_LE(std::abs(at(f, x + h, y) - at(f, x, y)), 10.0 * h);
    EXPECT_LE(std::abs(at(f, x, y + h) - at(f, x, y)), 10.0 * h);
  }
}

TEST(ELExpr, BranchSignatureDistinguishesRegions) {
  const auto f = ELExpr::convex_plateau(qc());
  EXPECT_NE(branch_signature(f, std::vector<double>{0.1, 0.1}), branch_signature(f, std::vector<double>{2.0, 2.0}));
  EXPECT_EQ(branch_signature(f, std::vector<double>{2.0, 2.0}), branch_signature(f, std::vector<double>{3.0, 2.5}));
}

// Truncation family f_k = min(x, 1 + 1/k) converges to min(x, 1); the limit's
// one-sided partials bracket the limits of the sequence's partials.
TEST(ELExpr, TruncationFamilyLimitBracketsPartials) {
  const auto limit = ELExpr::truncate_min(1.0, ELExpr::linear({1.0}));
  for (double x : {0.5, 1.0, 1.5}) {
    const double p[1] = {x};
    const auto g = one_sided_partials(limit, p);
    double liminf_right = 1e300;
    double limsup_left = -1e300;
    for (int k = 1000; k <= 1010; ++k) {
      const auto fk = ELExpr::truncate_min(1.0 + 1.0 / k, ELExpr::linear({1.0}));
      EXPECT_NEAR(eval(fk, p), eval(limit, p), 1.0 / k + 1e-15);
      const auto gk = one_sided_partials(fk, p);
      liminf_right = std::min(liminf_right, gk.right[0]);
      limsup_left = std::max(limsup_left, gk.left[0]);
    }
    EXPECT_LE(g.right[0], liminf_right);
    EXPECT_LE(liminf_right, limsup_left);
    EXPECT_LE(limsup_left, g.left[0]);
  }
}

TEST(ELExpr, CopiesShareTree) {
  const auto f = ELExpr::convex_plateau(qc());
  const ELExpr g = f;
  EXPECT_EQ(&f.node(), &g.node());
}
