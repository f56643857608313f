#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <vector>

#include "elopt/analysis.hpp"
#include "elopt/constructions.hpp"
#include "elopt/el_expr.hpp"
#include "elopt/lp_oracle.hpp"

namespace {

using namespace elopt;

const Curve2D& qc() {
  static const Curve2D c = Curve2D::quadratic(1.0, 1.0, 0.5);
  return c;
}

std::vector<std::array<double, 2>> points(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  std::vector<std::array<double, 2>> out(n);
  for (auto& p : out) p = {u(rng), u(rng)};
  return out;
}

void BM_EvalPlateau(benchmark::State& state) {
  const auto expr = convex_plateau(qc()).expr;
  const auto pts = points(1024);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(expr, pts[k++ & 1023]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EvalPlateau);

void BM_PartialsPlateau(benchmark::State& state) {
  const auto expr = convex_plateau(qc()).expr;
  const auto pts = points(1024);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(one_sided_partials(expr, pts[k++ & 1023]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PartialsPlateau);

void BM_CheckEl(benchmark::State& state) {
  const auto expr = convex_diag(qc()).expr;
  const std::array<double, 2> box{1.5, 1.5};
  SuiteOptions opts;
  opts.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_el(expr, box, opts));
  }
}
BENCHMARK(BM_CheckEl)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_GridLp(benchmark::State& state) {
  const auto lp = build_lp(qc(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lp(lp));
  }
}
BENCHMARK(BM_GridLp)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_GridLpSimplex(benchmark::State& state) {
  const auto lp = build_lp(qc(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lp(lp, LpMethod::DenseSimplex));
  }
}
BENCHMARK(BM_GridLpSimplex)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
