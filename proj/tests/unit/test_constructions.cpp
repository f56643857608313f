#include <gtest/gtest.h>

#include "elopt/analysis.hpp"
#include "elopt/constructions.hpp"

using namespace elopt;

namespace {

Curve2D qc() { return Curve2D::quadratic(1.0, 1.0, 0.5); }
Curve2D qcc() { return Curve2D::quadratic(1.0, 1.0, -0.5); }

double at(const ELExpr& e, double x, double y) {
  const double p[2] = {x, y};
  return eval(e, p);
}

}  // namespace

TEST(Constructions, LinearOpt) {
  struct Case {
    std::vector<double> c;
    double M;
    double k;
    double cost;
  };
  for (const auto& [c, M, k, expected] : {Case{{1.0, 2.0}, 1.0, 1.0, 2.0}, Case{{3.0, 3.0, 3.0}, 2.0, 1.0 / 3.0, 1.0},
                                          Case{{2.0, 5.0}, 10.0, 0.5, 2.5}}) {
    const auto r = linear_opt(Hyperplane{c, M});
    EXPECT_NEAR(r.scale_k, k, 1e-15);
    EXPECT_NEAR(cost(r.expr), expected, 1e-12);
    EXPECT_NEAR(r.claimed_cost, expected, 1e-12);
  }
}

TEST(Constructions, LinearOptIsFeasibleWithUnitJump) {
  const Hyperplane h{{1.0, 2.0}, 1.0};
  const auto feas = check_feasible(linear_opt(h).expr, h);
  EXPECT_TRUE(feas.feasible);
  EXPECT_NEAR(feas.min_jump, 1.0, 1e-12);
  EXPECT_EQ(feas.witness_coordinate, 0u);
}

TEST(Constructions, ConvexPlateauQC) {
  const auto r = convex_plateau(qc());
  EXPECT_FALSE(r.fallback);
  // max{-alpha'(0), -beta'(0)} = max{1.5, 2}.
  EXPECT_NEAR(cost(r.expr), 2.0, 1e-12);
}

TEST(Constructions, ConvexDiagQC) {
  const auto r = convex_diag(qc());
  // k = min{-alpha'(1), -beta'(1)} = min{0.5, 1/1.5}.
  EXPECT_NEAR(r.scale_k, 2.0, 1e-12);
  EXPECT_NEAR(cost(r.expr), 2.0, 1e-12);
  // Unscaled cost is exactly one.
  EXPECT_NEAR(cost(ELExpr::convex_diag(qc())), 1.0, 1e-12);
  EXPECT_NEAR(at(r.expr, 0.5, 0.375), 1.75, 1e-12);
}

TEST(Constructions, ConcaveQCC) {
  const auto r = concave_construct(qcc());
  EXPECT_NEAR(r.scale_k, 2.0, 1e-12);
  EXPECT_NEAR(cost(r.expr), 2.0, 1e-12);
  EXPECT_NEAR(cost_total(r.expr), 2.25, 1e-12);
}

TEST(Constructions, SymmetricConvexCurve) {
  // Hyperbola with a = b is symmetric about the diagonal.
  const Curve2D c = Curve2D::hyperbola(1.0, 1.0, 0.5);
  const auto t = t_point(c);
  ASSERT_TRUE(t);
  EXPECT_NEAR(t->tx, t->ty, 1e-10);
  EXPECT_NEAR(cost(convex_plateau(c).expr), -c.alpha_prime(0.0), 1e-10);
  const auto d = convex_diag(c);
  EXPECT_NEAR(d.scale_k, 1.0 / -c.alpha_prime(1.0), 1e-10);
  EXPECT_NEAR(cost(d.expr), 1.0 / -c.alpha_prime(1.0), 1e-10);
}

TEST(Constructions, SymmetricConcaveCurve) {
  const Curve2D c = Curve2D::hyperbola(1.0, 1.0, -2.0);
  const auto r = concave_construct(c);
  EXPECT_NEAR(r.scale_k, 1.0 / -c.alpha_prime(0.0), 1e-10);
}

TEST(Constructions, SteepConvexFallback) {
  // -alpha' = 3 - x on [0, 1]: no T-point.
  const Curve2D c = Curve2D::quadratic(1.0, 2.5, 0.5);
  const auto r = convex_plateau(c);
  EXPECT_TRUE(r.fallback);
  EXPECT_NEAR(cost(r.expr), -c.alpha_prime(0.0), 1e-12);
  const std::vector<double> box{1.5, 3.75};
  EXPECT_TRUE(check_el(r.expr, box).passed());
  EXPECT_TRUE(check_feasible(r.expr, c).feasible);
  EXPECT_THROW(convex_diag(c), std::invalid_argument);
}

TEST(Constructions, ShallowConvexFallback) {
  // Slopes in [0.2, 0.6].
  const Curve2D c = Curve2D::quadratic(2.0, 0.8, 0.1);
  ASSERT_TRUE(validate(c).valid);
  const auto r = convex_plateau(c);
  EXPECT_TRUE(r.fallback);
  EXPECT_NEAR(cost(r.expr), -c.beta_prime(0.0), 1e-12);
  EXPECT_TRUE(check_feasible(r.expr, c).feasible);
}

TEST(Constructions, ConcaveFallbacks) {
  for (const auto& c : {Curve2D::quadratic(1.0, 3.0, -0.5), Curve2D::quadratic(3.0, 1.0, -0.05)}) {
    ASSERT_TRUE(validate(c).valid);
    ASSERT_FALSE(t_point(c).has_value());
    const auto r = concave_construct(c);
    EXPECT_TRUE(r.fallback);
    EXPECT_NEAR(cost(r.expr), theorem1_bound(c).value, 1e-9);
    EXPECT_TRUE(check_feasible(r.expr, c).feasible);
  }
}

TEST(Constructions, ShapeMismatchRejected) {
  EXPECT_THROW(concave_construct(Curve2D::line(1.0, 1.0)), std::invalid_argument);
  EXPECT_THROW(convex_plateau(qcc()), std::invalid_argument);
  EXPECT_THROW(concave_construct(qc()), std::invalid_argument);
}

TEST(Constructions, ConstructForDispatch) {
  EXPECT_EQ(construct_for(Hyperplane{{1.0, 2.0}, 1.0}).kind, ConstructionKind::Linear);
  EXPECT_EQ(construct_for(Curve2D::line(1.0, 2.0)).kind, ConstructionKind::Linear);
  EXPECT_EQ(construct_for(qc()).kind, ConstructionKind::ConvexPlateau);
  EXPECT_EQ(construct_for(qcc()).kind, ConstructionKind::ConcaveStep);
  EXPECT_NEAR(cost(construct_for(Curve2D::line(1.0, 2.0)).expr), 2.0, 1e-12);
}

TEST(Constructions, KindNames) {
  for (auto k : {ConstructionKind::Linear, ConstructionKind::ConvexPlateau, ConstructionKind::ConvexDiag,
                 ConstructionKind::ConcaveStep}) {
    EXPECT_EQ(parse_construction_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_construction_kind("nope"), std::invalid_argument);
}

// Tightness across families: the shape-matching construction meets the
// normal-ratio bound.
TEST(Constructions, TightnessAcrossFamilies) {
  const std::vector<Surface> surfaces{Hyperplane{{1.0, 4.0}, 2.0},
                                      Hyperplane{{0.3, 2.0, 7.0}, 1.5},
                                      Curve2D::line(2.0, 0.5),
                                      qc(),
                                      qcc(),
                                      Curve2D::quadratic(2.0, 3.0, 0.3),
                                      Curve2D::hyperbola(1.0, 2.0, 0.4),
                                      Curve2D::hyperbola(2.0, 1.0, -3.0),
                                      Curve2D::quadratic(1.0, 2.5, 0.5)};
  for (const auto& s : surfaces) {
    const auto r = construct_for(s);
    EXPECT_NEAR(cost(r.expr), theorem1_bound(s).value, 1e-9) << to_string(r.kind);
    EXPECT_TRUE(check_feasible(r.expr, s).feasible) << to_string(r.kind);
  }
}
