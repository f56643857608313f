#include <gtest/gtest.h>

#include <cmath>

#include "elopt/analysis.hpp"
#include "elopt/constructions.hpp"
#include "elopt/sampling.hpp"

using namespace elopt;

namespace {

Curve2D qc() { return Curve2D::quadratic(1.0, 1.0, 0.5); }
Curve2D qcc() { return Curve2D::quadratic(1.0, 1.0, -0.5); }

const std::vector<double> kBox2{1.5, 1.5};

ScalarField product() {
  return ScalarField{2, [](std::span<const double> x) { return x[0] * x[1]; },
                     [](std::span<const double> x) {
                       return OneSidedGrad{{x[1], x[0]}, {x[1], x[0]}, {x[0] > 0.0, x[1] > 0.0}};
                     }};
}

}  // namespace

TEST(Analysis, TruncatedLinearPassesSuite) {
  const auto r = check_el(ELExpr::truncate_min(1.0, ELExpr::linear({1.0, 2.0})), kBox2);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.samples, kDefaultSuiteSamples);
  for (const auto& p : r.properties) {
    EXPECT_GT(p.checks, 0u) << p.name;
    EXPECT_TRUE(p.witness.empty()) << p.name;
  }
}

TEST(Analysis, ZeroFunctionPasses) {
  EXPECT_TRUE(check_el(ELExpr::scale(0.0, ELExpr::convex_plateau(qc())), kBox2).passed());
}

TEST(Analysis, ProductFailsSubmodularity) {
  const auto r = check_el(product(), kBox2);
  EXPECT_FALSE(r.passed());
  const auto& sub = r.property("submodularity");
  EXPECT_FALSE(sub.passed);
  ASSERT_EQ(sub.witness.size(), 2u);
  // Confirm the witness independently.
  const auto& x = sub.witness[0];
  const auto& y = sub.witness[1];
  const double lhs = x[0] * x[1] + y[0] * y[1];
  const double rhs = std::min(x[0], y[0]) * std::min(x[1], y[1]) + std::max(x[0], y[0]) * std::max(x[1], y[1]);
  EXPECT_LT(lhs, rhs - 1e-7);
}

// The closure operations keep functions inside the class.
TEST(Analysis, ClosureOperationsPass) {
  const auto a = ELExpr::convex_plateau(qc());
  const auto b = ELExpr::scale(2.0, ELExpr::concave_step(qcc()));
  SuiteOptions opts;
  opts.samples = 3000;
  EXPECT_TRUE(check_el(ELExpr::sum(a, b), kBox2, opts).passed());
  EXPECT_TRUE(check_el(ELExpr::truncate_min(0.8, a), kBox2, opts).passed());
  EXPECT_TRUE(check_el(ELExpr::clamp({0.6, 0.4}, b), kBox2, opts).passed());
  const std::vector<double> box3{2.0, 2.0, 2.0};
  EXPECT_TRUE(check_el(ELExpr::truncate_min(1.0, ELExpr::linear({0.5, 1.0, 3.0})), box3, opts).passed());
}

TEST(Analysis, ReportIndependentOfWorkerCount) {
  const auto f = ELExpr::convex_diag(qc());
  SuiteOptions one;
  one.samples = 2000;
  SuiteOptions four = one;
  four.workers = 4;
  const auto a = check_el(f, kBox2, one);
  const auto b = check_el(f, kBox2, four);
  ASSERT_EQ(a.properties.size(), b.properties.size());
  for (std::size_t i = 0; i < a.properties.size(); ++i) {
    EXPECT_EQ(a.properties[i].worst_violation, b.properties[i].worst_violation);
    EXPECT_EQ(a.properties[i].checks, b.properties[i].checks);
  }
}

TEST(Analysis, FeasibilityOfConstructions) {
  EXPECT_TRUE(check_feasible(convex_plateau(qc()).expr, qc()).feasible);
  EXPECT_TRUE(check_feasible(convex_diag(qc()).expr, qc()).feasible);
  EXPECT_TRUE(check_feasible(concave_construct(qcc()).expr, qcc()).feasible);
}

TEST(Analysis, ConvexPlateauJumpApproachesOneNearT) {
  const auto r = check_feasible(convex_plateau(qc()).expr, qc(), 5000);
  EXPECT_GE(r.min_jump, 1.0 - 1e-9);
  EXPECT_LT(r.min_jump, 1.01);
  EXPECT_NEAR(r.witness_point[0], 0.5, 0.05);
}

TEST(Analysis, HalvedLinearIsInfeasible) {
  const Hyperplane h{{1.0, 2.0}, 1.0};
  const auto r = check_feasible(ELExpr::scale(0.5, linear_opt(h).expr), h);
  EXPECT_FALSE(r.feasible);
  EXPECT_NEAR(r.min_jump, 0.5, 1e-12);
}

TEST(Analysis, SurfaceSamplesStayOnSurface) {
  const Hyperplane h{{0.5, 1.0, 4.0}, 2.0};
  const auto r = check_feasible(ELExpr::scale(0.1, ELExpr::linear({1.0, 1.0, 1.0})), h, 50);
  ASSERT_EQ(r.witness_point.size(), 3u);
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += h.c[i] * r.witness_point[i];
  EXPECT_NEAR(s, h.M, 1e-12);
}

TEST(Analysis, DerivativesMatchFiniteDifferences) {
  for (const auto& f : {convex_plateau(qc()).expr, convex_diag(qc()).expr, concave_construct(qcc()).expr,
                        linear_opt(Hyperplane{{1.0, 2.0, 0.5}, 1.0}).expr}) {
    const std::vector<double> box(f.dimension(), 1.5);
    const auto r = check_derivatives(f, box);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.points_checked, 200u);
    EXPECT_LT(r.max_relative_error, 1e-6);
  }
}

TEST(Analysis, FiniteDifferenceStep) {
  EXPECT_DOUBLE_EQ(finite_difference_step(std::vector<double>{0.5, 0.1}), 1e-5);
  EXPECT_DOUBLE_EQ(finite_difference_step(std::vector<double>{3.0, 0.1}), 3e-5);
}

TEST(Analysis, Theorem1Hyperplane) {
  const auto b = theorem1_bound(Hyperplane{{1.0, 4.0}, 2.0});
  EXPECT_DOUBLE_EQ(b.value, 4.0);
  EXPECT_EQ(b.witness.i, 0u);
  EXPECT_EQ(b.witness.j, 1u);
}

TEST(Analysis, Theorem1Curves) {
  const auto b = theorem1_bound(qc());
  EXPECT_NEAR(b.value, 2.0, 1e-12);
  EXPECT_TRUE(b.witness.closure_limit);
  EXPECT_EQ(b.witness.point[0], 1.0);
  EXPECT_EQ(b.witness.i, 0u);
  EXPECT_EQ(b.witness.j, 1u);
  EXPECT_EQ(b.note, "sup over closure");

  const auto c = theorem1_bound(qcc());
  EXPECT_NEAR(c.value, 2.0, 1e-12);
  EXPECT_EQ(c.witness.point[0], 0.0);
}

TEST(Analysis, SampledBoundAgrees) {
  for (const auto& c : {qc(), qcc(), Curve2D::hyperbola(1.0, 2.0, 0.4), Curve2D::quadratic(1.0, 2.5, 0.5)}) {
    EXPECT_NEAR(theorem1_bound_sampled(c).value, theorem1_bound(c).value, 1e-9);
  }
}

// Every feasible function found costs at least the bound.
TEST(Analysis, FeasibleCostsAreLowerBounded) {
  const Surface s = qc();
  const double bound = theorem1_bound(s).value;
  for (double lambda : {0.5, 1.0, 1.5, 3.0}) {
    for (const auto& base : {convex_plateau(qc()).expr, convex_diag(qc()).expr}) {
      const auto f = ELExpr::scale(lambda, base);
      if (check_feasible(f, s).feasible) {
        EXPECT_GE(cost(f), bound - 1e-6);
      }
    }
  }
}

TEST(Analysis, SamplingStreamsAreReproducible) {
  SampleStream a(42, 3);
  SampleStream b(42, 3);
  SampleStream c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    differs = differs || u != c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_TRUE(differs);
}
