#include "elopt/report.hpp"

#include <algorithm>
#include <thread>

#include "elopt/lp_oracle.hpp"

namespace elopt {

std::vector<LpBound> lp_sweep(const Surface& surface, std::span<const std::size_t> grid_m, unsigned workers) {
  std::vector<GridLP> programs;
  programs.reserve(grid_m.size());
  for (std::size_t m : grid_m) programs.push_back(build_lp(surface, m));

  std::vector<LpBound> out(grid_m.size());
  auto run = [&](std::size_t k) {
    const LpSolution sol = solve_lp(programs[k]);
    out[k] = LpBound{programs[k].m, sol.status, sol.value, sol.iterations, sol.method, programs[k].crossing_rows};
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid_m.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < programs.size(); ++k) run(k);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < programs.size(); k += workers) run(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

BoundReport gap_report(const Surface& surface, std::span<const std::size_t> grid_m, unsigned workers) {
  BoundReport r;
  const ConstructionResult c = construct_for(surface);
  r.thm1 = theorem1_bound(surface);
  r.construction = c.kind;
  r.construction_cost = cost(c.expr);
  try {
    r.construction_cost_total = cost_total(c.expr);
  } catch (const std::domain_error&) {
    r.construction_cost_total.reset();
  }
  r.fallback = c.fallback;
  r.gap_construction_thm1 = r.construction_cost - r.thm1.value;
  if (dimension(surface) == 2 && !grid_m.empty()) {
    r.lp = lp_sweep(surface, grid_m, workers);
    for (const auto& b : r.lp) {
      if (b.status != LpStatus::Optimal) continue;
      r.lp_bound = r.lp_bound ? std::max(*r.lp_bound, b.value) : b.value;
    }
    if (r.lp_bound) r.gap_thm1_lp = r.thm1.value - *r.lp_bound;
  }
  return r;
}

}  // namespace elopt
