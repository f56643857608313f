#include "elopt/lp_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace elopt {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

std::string_view to_string(LpMethod method) {
  switch (method) {
    case LpMethod::Auto:
      return "auto";
    case LpMethod::DenseSimplex:
      return "dense_simplex";
    case LpMethod::InteriorPoint:
      return "interior_point";
  }
  return "unknown";
}

namespace {

void check_shape(const LinearProgram& lp) {
  if (lp.objective.size() != lp.num_vars) throw std::invalid_argument("LP objective size does not match num_vars");
  for (const auto& row : lp.rows) {
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("LP row has non-finite rhs");
    for (const auto& [j, v] : row.terms) {
      if (j >= lp.num_vars) throw std::invalid_argument("LP row references unknown variable");
      if (!std::isfinite(v)) throw std::invalid_argument("LP row has non-finite coefficient");
    }
  }
}

// Dense tableau. Row r < m holds constraint r; row m holds reduced costs.
// The last column holds the right-hand side (negated objective in row m).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t width = cols_ + 1;
    double* prow = &data_[pr * width];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * width];
      const double factor = row[pc];
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) {
        if (prow[c] != 0.0) row[c] -= factor * prow[c];
      }
      row[pc] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { Optimal, Unbounded };

// Dantzig pricing (most negative reduced cost) while pivots make progress.
// After kDegenerateRun consecutive degenerate pivots it switches to Bland's
// rule (lowest-index entering and leaving variables) until the objective
// strictly improves again; Bland's rule cannot cycle, so neither can this.
constexpr std::size_t kDegenerateRun = 50;

PhaseResult run_phase(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed_cols, double tol,
                      std::size_t& iterations, std::size_t max_iterations) {
  const std::size_t m = t.rows();
  std::size_t degenerate = 0;
  while (true) {
    const bool bland = degenerate >= kDegenerateRun;
    std::optional<std::size_t> enter;
    double most_negative = -tol;
    for (std::size_t c = 0; c < allowed_cols; ++c) {
      const double d = t.at(m, c);
      if (d >= -tol) continue;
      if (bland) {
        enter = c;
        break;
      }
      if (d < most_negative) {
        most_negative = d;
        enter = c;
      }
    }
    if (!enter) return PhaseResult::Optimal;
    if (iterations >= max_iterations) {
      throw LpError("simplex iteration cap (" + std::to_string(max_iterations) + ") exceeded");
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, *enter);
      if (a > tol) best = std::min(best, t.rhs(r) / a);
    }
    if (!std::isfinite(best)) return PhaseResult::Unbounded;
    std::optional<std::size_t> leave;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, *enter);
      if (a <= tol || t.rhs(r) / a > best + tol) continue;
      if (!leave || basis[r] < basis[*leave]) leave = r;
    }
    degenerate = best <= tol ? degenerate + 1 : 0;
    t.pivot(*leave, *enter);
    basis[*leave] = *enter;
    ++iterations;
  }
}

void load_costs(Tableau& t, const std::vector<std::size_t>& basis, const std::vector<double>& cost) {
  const std::size_t m = t.rows();
  for (std::size_t c = 0; c <= t.cols(); ++c) t.at(m, c) = 0.0;
  for (std::size_t c = 0; c < cost.size(); ++c) t.at(m, c) = cost[c];
  for (std::size_t r = 0; r < m; ++r) {
    const double cb = basis[r] < cost.size() ? cost[basis[r]] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= t.cols(); ++c) t.at(m, c) -= cb * t.at(r, c);
  }
}

}  // namespace

LpSolution solve_dense_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  check_shape(lp);
  const std::size_t n = lp.num_vars;
  const std::size_t m = lp.rows.size();
  const double tol = options.tolerance;

  // Columns: [x | surplus per >= row | artificial per row that needs one].
  std::size_t n_surplus = 0;
  for (const auto& row : lp.rows) n_surplus += row.sense == RowSense::GreaterEqual ? 1 : 0;
  std::vector<bool> needs_artificial(m, false);
  std::size_t n_art = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    needs_artificial[r] = row.sense == RowSense::Equal || row.rhs > 0.0;
    n_art += needs_artificial[r] ? 1 : 0;
  }
  const std::size_t structural = n + n_surplus;
  Tableau t(m, structural + n_art);
  std::vector<std::size_t> basis(m);
  std::size_t s_col = n;
  std::size_t a_col = structural;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    // Normalize so that rhs >= 0 and a zero-rhs surplus enters the basis with +1.
    const bool flip = row.rhs < 0.0 || (row.rhs == 0.0 && row.sense == RowSense::GreaterEqual);
    const double sign = flip ? -1.0 : 1.0;
    for (const auto& [j, v] : row.terms) t.at(r, j) += sign * v;
    t.rhs(r) = sign * row.rhs;
    if (row.sense == RowSense::GreaterEqual) {
      t.at(r, s_col) = -sign;
      if (!needs_artificial[r]) basis[r] = s_col;
      ++s_col;
    }
    if (needs_artificial[r]) {
      t.at(r, a_col) = 1.0;
      basis[r] = a_col++;
    }
  }

  LpSolution sol;
  sol.method = LpMethod::DenseSimplex;

  if (n_art > 0) {
    std::vector<double> phase1(structural + n_art, 0.0);
    std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(structural), phase1.end(), 1.0);
    load_costs(t, basis, phase1);
    run_phase(t, basis, structural + n_art, tol, sol.iterations, options.max_iterations);
    if (-t.rhs(m) > tol * std::max<double>(1.0, static_cast<double>(m))) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < structural) continue;
      for (std::size_t c = 0; c < structural; ++c) {
        if (std::abs(t.at(r, c)) > tol) {
          t.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }

  std::vector<double> phase2(structural, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), phase2.begin());
  load_costs(t, basis, phase2);
  if (run_phase(t, basis, structural, tol, sol.iterations, options.max_iterations) == PhaseResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = std::max(0.0, t.rhs(r));
  }
  sol.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];
  sol.basis = basis;
  return sol;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

double max_step(const Vec& v, const Vec& dv) {
  double step = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) step = std::min(step, -v[i] / dv[i]);
  }
  return step;
}

struct Presolved {
  std::vector<std::optional<double>> fixed;
  std::vector<std::size_t> free_index;  // reduced index -> original
  SpMat A;
  Vec r;
  Vec c;
  double offset = 0.0;
};

// Singleton equality rows fix their variable; everything else stays.
std::optional<Presolved> presolve(const LinearProgram& lp) {
  Presolved p;
  p.fixed.assign(lp.num_vars, std::nullopt);
  for (const auto& row : lp.rows) {
    if (row.sense != RowSense::Equal) continue;
    if (row.terms.size() != 1 || row.terms[0].second == 0.0) {
      throw std::invalid_argument("interior point method supports only singleton equality rows");
    }
    const double value = row.rhs / row.terms[0].second;
    const auto j = row.terms[0].first;
    if (value < 0.0 || (p.fixed[j] && *p.fixed[j] != value)) return std::nullopt;
    p.fixed[j] = value;
  }
  std::vector<std::ptrdiff_t> reduced(lp.num_vars, -1);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (p.fixed[j]) {
      p.offset += lp.objective[j] * *p.fixed[j];
    } else {
      reduced[j] = static_cast<std::ptrdiff_t>(p.free_index.size());
      p.free_index.push_back(j);
    }
  }
  const auto n = static_cast<Eigen::Index>(p.free_index.size());
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> rhs;
  for (const auto& row : lp.rows) {
    if (row.sense == RowSense::Equal) continue;
    double b = row.rhs;
    const auto r = static_cast<Eigen::Index>(rhs.size());
    bool any = false;
    for (const auto& [j, v] : row.terms) {
      if (p.fixed[j]) {
        b -= v * *p.fixed[j];
      } else if (v != 0.0) {
        triplets.emplace_back(r, reduced[j], v);
        any = true;
      }
    }
    if (!any) {
      if (b > 0.0) return std::nullopt;
      continue;
    }
    rhs.push_back(b);
  }
  p.A.resize(static_cast<Eigen::Index>(rhs.size()), n);
  p.A.setFromTriplets(triplets.begin(), triplets.end());
  p.A.makeCompressed();
  p.r = Eigen::Map<Vec>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  p.c.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) p.c[k] = lp.objective[p.free_index[static_cast<std::size_t>(k)]];
  return p;
}

}  // namespace

LpSolution solve_interior_point(const LinearProgram& lp, const InteriorPointOptions& options) {
  check_shape(lp);
  LpSolution sol;
  sol.method = LpMethod::InteriorPoint;
  const auto pre = presolve(lp);
  if (!pre) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  const SpMat& A = pre->A;
  const Vec& r = pre->r;
  const Vec& c = pre->c;
  const Eigen::Index n = A.cols();
  const Eigen::Index p = A.rows();
  const SpMat At = A.transpose();

  // Primal x, surplus s (A x - s = r); duals y (rows), w (bounds).
  Vec x = Vec::Ones(n);
  Vec s = Vec::Ones(p);
  Vec y = Vec::Ones(p);
  Vec w = Vec::Ones(n);
  const double total = static_cast<double>(n + p);
  const double r_norm = 1.0 + r.lpNorm<Eigen::Infinity>();
  const double c_norm = 1.0 + c.lpNorm<Eigen::Infinity>();
  constexpr double kDivergence = 1e14;

  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool analyzed = false;
  // Round-off in the normal equations limits the attainable accuracy on
  // degenerate problems; late iterates can drift. Keep the best iterate by
  // merit and return it once progress stops.
  double best_merit = std::numeric_limits<double>::infinity();
  Vec best_x = x;
  std::size_t since_best = 0;
  constexpr std::size_t kStallIterations = 5;
  constexpr double kAcceptableMerit = 1e-6;

  for (std::size_t it = 0;; ++it) {
    const Vec rp = r - A * x + s;
    const Vec rd = c - At * y - w;
    const double mu = (x.dot(w) + s.dot(y)) / total;
    const double pobj = c.dot(x);
    const double dobj = r.dot(y);
    const double merit = std::max({rp.lpNorm<Eigen::Infinity>() / r_norm, rd.lpNorm<Eigen::Infinity>() / c_norm,
                                   std::abs(pobj - dobj) / (1.0 + std::abs(pobj))});
    if (merit < best_merit) {
      best_merit = merit;
      best_x = x;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (best_merit < options.tolerance || (since_best >= kStallIterations && best_merit < kAcceptableMerit)) {
      sol.iterations = it;
      break;
    }
    if (x.lpNorm<Eigen::Infinity>() > kDivergence) {
      sol.status = LpStatus::Unbounded;
      sol.iterations = it;
      return sol;
    }
    if (y.lpNorm<Eigen::Infinity>() > kDivergence) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = it;
      return sol;
    }
    if (it >= options.max_iterations) {
      throw LpError("interior point iteration cap (" + std::to_string(options.max_iterations) + ") exceeded");
    }

    const Vec d = y.cwiseQuotient(s);
    const Vec e = w.cwiseQuotient(x);
    SpMat normal = At * d.asDiagonal() * A;
    for (Eigen::Index k = 0; k < n; ++k) normal.coeffRef(k, k) += e[k];
    normal.makeCompressed();
    if (!analyzed) {
      ldlt.analyzePattern(normal);
      analyzed = true;
    }
    ldlt.factorize(normal);
    if (ldlt.info() != Eigen::Success) {
      const double shift = 1e-12 * std::max(1.0, normal.diagonal().lpNorm<Eigen::Infinity>());
      for (Eigen::Index k = 0; k < n; ++k) normal.coeffRef(k, k) += shift;
      ldlt.factorize(normal);
      if (ldlt.info() != Eigen::Success) throw LpError("interior point: normal equations could not be factored");
    }

    struct Step {
      Vec dx, ds, dy, dw;
    };
    auto direction = [&](const Vec& rxw, const Vec& rsy) {
      Step st;
      const Vec rhs = At * (d.cwiseProduct(rp) + rsy.cwiseQuotient(s)) + rxw.cwiseQuotient(x) - rd;
      st.dx = ldlt.solve(rhs);
      for (int refine = 0; refine < 2; ++refine) st.dx += ldlt.solve(rhs - normal * st.dx);
      st.dy = d.cwiseProduct(rp - A * st.dx) + rsy.cwiseQuotient(s);
      st.ds = (rsy - s.cwiseProduct(st.dy)).cwiseQuotient(y);
      // Keeps dual feasibility exact under round-off in the factorization.
      st.dw = (rxw - w.cwiseProduct(st.dx)).cwiseQuotient(x);
      return st;
    };

    const Step aff = direction(-x.cwiseProduct(w), -s.cwiseProduct(y));
    const double ap_aff = std::min(max_step(x, aff.dx), max_step(s, aff.ds));
    const double ad_aff = std::min(max_step(w, aff.dw), max_step(y, aff.dy));
    const double mu_aff =
        ((x + ap_aff * aff.dx).dot(w + ad_aff * aff.dw) + (s + ap_aff * aff.ds).dot(y + ad_aff * aff.dy)) / total;
    const double sigma = std::pow(mu_aff / mu, 3.0);

    const Vec rxw = Vec::Constant(n, sigma * mu) - x.cwiseProduct(w) - aff.dx.cwiseProduct(aff.dw);
    const Vec rsy = Vec::Constant(p, sigma * mu) - s.cwiseProduct(y) - aff.ds.cwiseProduct(aff.dy);
    const Step st = direction(rxw, rsy);
    constexpr double kEta = 0.995;
    const double ap = std::min(1.0, kEta * std::min(max_step(x, st.dx), max_step(s, st.ds)));
    const double ad = std::min(1.0, kEta * std::min(max_step(w, st.dw), max_step(y, st.dy)));
    x += ap * st.dx;
    s += ap * st.ds;
    y += ad * st.dy;
    w += ad * st.dw;
  }

  sol.status = LpStatus::Optimal;
  sol.x.assign(lp.num_vars, 0.0);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (pre->fixed[j]) sol.x[j] = *pre->fixed[j];
  }
  for (std::size_t k = 0; k < pre->free_index.size(); ++k) {
    sol.x[pre->free_index[k]] = std::max(0.0, best_x[static_cast<Eigen::Index>(k)]);
  }
  sol.value = 0.0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) sol.value += lp.objective[j] * sol.x[j];
  return sol;
}

LpSolution solve(const LinearProgram& lp, LpMethod method) {
  if (method == LpMethod::Auto) {
    method = lp.num_vars <= kDenseSimplexLimit ? LpMethod::DenseSimplex : LpMethod::InteriorPoint;
  }
  return method == LpMethod::DenseSimplex ? solve_dense_simplex(lp) : solve_interior_point(lp);
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  if (x.size() != lp.num_vars) throw std::invalid_argument("max_violation: assignment size mismatch");
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [j, v] : row.terms) lhs += v * x[j];
    const double gap = lhs - row.rhs;
    worst = std::max(worst, row.sense == RowSense::Equal ? std::abs(gap) : -gap);
  }
  return worst;
}

}  // namespace elopt
