#include <gtest/gtest.h>

#include <sstream>

#include "elopt/constructions.hpp"
#include "elopt/lp_oracle.hpp"
#include "elopt/report.hpp"

using namespace elopt;

namespace {

Curve2D qc() { return Curve2D::quadratic(1.0, 1.0, 0.5); }
Curve2D qcc() { return Curve2D::quadratic(1.0, 1.0, -0.5); }

LinearProgram tiny(std::vector<double> objective, std::vector<LpRow> rows) {
  LinearProgram lp;
  lp.num_vars = objective.size();
  lp.objective = std::move(objective);
  lp.rows = std::move(rows);
  return lp;
}

}  // namespace

TEST(LpSolver, SmallProblemBothMethods) {
  // min x + 2y s.t. x + y >= 1, x - y >= -0.5  ->  x = 1, y = 0.
  const auto lp = tiny({1.0, 2.0}, {LpRow{{{0, 1.0}, {1, 1.0}}, RowSense::GreaterEqual, 1.0},
                                    LpRow{{{0, 1.0}, {1, -1.0}}, RowSense::GreaterEqual, -0.5}});
  const auto s = solve_dense_simplex(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  const auto ip = solve_interior_point(lp);
  ASSERT_EQ(ip.status, LpStatus::Optimal);
  EXPECT_NEAR(ip.value, 1.0, 1e-8);
}

TEST(LpSolver, EqualityAndInfeasibility) {
  const auto eq = tiny({1.0, 1.0}, {LpRow{{{0, 1.0}, {1, 1.0}}, RowSense::Equal, 2.0}});
  const auto s = solve_dense_simplex(eq);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.value, 2.0, 1e-12);

  const auto bad = tiny({1.0}, {LpRow{{{0, -1.0}}, RowSense::GreaterEqual, 1.0}});
  EXPECT_EQ(solve_dense_simplex(bad).status, LpStatus::Infeasible);
  EXPECT_EQ(solve_interior_point(bad).status, LpStatus::Infeasible);
}

TEST(LpSolver, Unbounded) {
  const auto lp = tiny({-1.0, 0.0}, {LpRow{{{0, 1.0}, {1, -1.0}}, RowSense::GreaterEqual, 0.0}});
  EXPECT_EQ(solve_dense_simplex(lp).status, LpStatus::Unbounded);
}

TEST(LpSolver, IterationCapThrows) {
  const auto lp = tiny({1.0, 2.0}, {LpRow{{{0, 1.0}, {1, 1.0}}, RowSense::GreaterEqual, 1.0}});
  EXPECT_THROW(solve_dense_simplex(lp, SimplexOptions{1e-9, 0}), LpError);
  EXPECT_THROW(solve_interior_point(lp, InteriorPointOptions{1e-9, 1}), LpError);
}

// Degenerate LP on which textbook Dantzig pricing cycles (Beale's example).
TEST(LpSolver, DegenerateProblemTerminates) {
  const auto lp = tiny({-0.75, 150.0, -0.02, 6.0},
                       {LpRow{{{0, -0.25}, {1, 60.0}, {2, 0.04}, {3, -9.0}}, RowSense::GreaterEqual, 0.0},
                        LpRow{{{0, -0.5}, {1, 90.0}, {2, 0.02}, {3, -3.0}}, RowSense::GreaterEqual, 0.0},
                        LpRow{{{2, -1.0}}, RowSense::GreaterEqual, -1.0}});
  const auto s = solve_dense_simplex(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.value, -0.05, 1e-12);
}

TEST(GridLp, Structure) {
  const auto lp = build_lp(qc(), 8);
  EXPECT_EQ(lp.program.num_vars, 82u);
  EXPECT_EQ(lp.kinds.front(), GridRowKind::Pointed);
  EXPECT_EQ(lp.program.rows.front().sense, RowSense::Equal);
  EXPECT_GT(lp.crossing_rows, 0u);
  EXPECT_DOUBLE_EQ(lp.hx, 0.125);
  EXPECT_EQ(lp.program.rows.size(), lp.names.size());
  for (const auto& row : lp.program.rows) {
    EXPECT_TRUE(std::isfinite(row.rhs));
  }
}

TEST(GridLp, RejectsBadGrids) {
  EXPECT_THROW(build_lp(qc(), 3), std::invalid_argument);
  EXPECT_THROW(build_lp(qc(), 97), std::invalid_argument);
  EXPECT_THROW(build_lp(Hyperplane{{1.0, 1.0, 1.0}, 1.0}, 8), std::invalid_argument);
}

TEST(GridLp, AnisotropicBox) {
  const auto lp = build_lp(Hyperplane{{2.0, 5.0}, 10.0}, 8);
  EXPECT_DOUBLE_EQ(lp.X, 5.0);
  EXPECT_DOUBLE_EQ(lp.Y, 2.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_LE(sol.value, 2.5 + 1e-9);
}

TEST(GridLp, SymmetricHyperplaneBound) {
  const auto sol = solve_lp(build_lp(Hyperplane{{1.0, 1.0}, 1.0}, 4));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_LE(sol.value, 1.0 + 1e-9);
}

TEST(GridLp, NoCrossingRowsGivesZero) {
  auto lp = build_lp(qc(), 4);
  std::vector<LpRow> kept;
  for (std::size_t r = 0; r < lp.program.rows.size(); ++r) {
    if (lp.kinds[r] != GridRowKind::Crossing) kept.push_back(lp.program.rows[r]);
  }
  lp.program.rows = kept;
  const auto sol = solve_dense_simplex(lp.program);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_EQ(sol.value, 0.0);
  for (double v : sol.x) EXPECT_EQ(v, 0.0);
}

TEST(GridLp, LinearBoundRange) {
  const auto sol = solve_lp(build_lp(Hyperplane{{1.0, 2.0}, 1.0}, 32));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_GE(sol.value, 1.5);
  EXPECT_LE(sol.value, 2.0 + 1e-9);
}

TEST(GridLp, ConcaveBound) {
  const auto sol = solve_lp(build_lp(qcc(), 32));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_LE(sol.value, 2.0 + 1e-9);
  EXPECT_GT(sol.value, 0.0);
}

TEST(GridLp, SimplexAndInteriorPointAgree) {
  for (const Surface& s : {Surface{Hyperplane{{1.0, 2.0}, 1.0}}, Surface{qc()}, Surface{qcc()}}) {
    for (std::size_t m : {4, 6, 8, 12}) {
      const auto lp = build_lp(s, m);
      const auto a = solve_lp(lp, LpMethod::DenseSimplex);
      const auto b = solve_lp(lp, LpMethod::InteriorPoint);
      ASSERT_EQ(a.status, LpStatus::Optimal);
      ASSERT_EQ(b.status, LpStatus::Optimal);
      EXPECT_NEAR(a.value, b.value, 1e-7) << m;
      EXPECT_LT(check_assignment(lp, a.x).max_violation, 1e-9);
      EXPECT_LT(check_assignment(lp, b.x).max_violation, 1e-7);
    }
  }
}

TEST(GridLp, Deterministic) {
  const auto lp = build_lp(qc(), 10);
  const auto a = solve_lp(lp, LpMethod::DenseSimplex);
  const auto b = solve_lp(lp, LpMethod::DenseSimplex);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.x, b.x);
  const auto lp32 = build_lp(qc(), 32);
  const auto c = solve_lp(lp32);
  const auto d = solve_lp(lp32);
  EXPECT_EQ(c.value, d.value);
  EXPECT_EQ(c.x, d.x);
}

TEST(GridLp, RestrictionWitness) {
  for (const Surface& s : {Surface{Hyperplane{{1.0, 2.0}, 1.0}}, Surface{qc()}, Surface{qcc()}}) {
    for (std::size_t m : {8, 16, 32}) {
      const auto lp = build_lp(s, m);
      const auto c = construct_for(s);
      const auto w = restrict_to_grid(c.expr, lp);
      EXPECT_LT(check_assignment(lp, w).max_violation, 1e-9);
      EXPECT_LE(w[lp.t_var()], cost(c.expr) + 1e-12);
    }
  }
}

TEST(GridLp, LpFormatDump) {
  const auto lp = build_lp(qc(), 4);
  std::ostringstream out;
  write_lp_format(lp, out);
  const std::string text = out.str();
  EXPECT_NE(text.find("Minimize\n obj: t\n"), std::string::npos);
  EXPECT_NE(text.find(" pointed: f_0_0 = 0\n"), std::string::npos);
  EXPECT_NE(text.find(" obj_x: 0.25 t - f_1_0 >= 0\n"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 4), "End\n");
}

TEST(Report, LinearTightness) {
  const auto r = gap_report(Hyperplane{{1.0, 2.0}, 1.0});
  EXPECT_DOUBLE_EQ(r.thm1.value, 2.0);
  EXPECT_NEAR(r.construction_cost, 2.0, 1e-12);
  EXPECT_NEAR(r.gap_construction_thm1, 0.0, 1e-12);
  EXPECT_FALSE(r.lp_bound.has_value());
}

TEST(Report, ConvexWithLp) {
  const std::vector<std::size_t> grid{8, 32};
  const auto r = gap_report(qc(), grid);
  EXPECT_NEAR(r.construction_cost, 2.0, 1e-12);
  EXPECT_NEAR(r.thm1.value, 2.0, 1e-12);
  ASSERT_TRUE(r.lp_bound.has_value());
  EXPECT_LE(*r.lp_bound, 2.0 + 1e-6);
  ASSERT_EQ(r.lp.size(), 2u);
  EXPECT_EQ(r.lp[1].m, 32u);
  EXPECT_NEAR(*r.gap_thm1_lp, r.thm1.value - *r.lp_bound, 1e-15);
}

TEST(Report, ConcaveAndSweepWorkers) {
  const std::vector<std::size_t> grid{6, 8, 10};
  const auto a = gap_report(qcc(), grid, 1);
  const auto b = gap_report(qcc(), grid, 3);
  EXPECT_NEAR(a.construction_cost, 2.0, 1e-12);
  ASSERT_EQ(a.lp.size(), b.lp.size());
  for (std::size_t k = 0; k < a.lp.size(); ++k) EXPECT_EQ(a.lp[k].value, b.lp[k].value);
}
