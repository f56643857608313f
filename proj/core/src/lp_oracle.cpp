#include "elopt/lp_oracle.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace elopt {

std::string_view to_string(GridRowKind kind) {
  switch (kind) {
    case GridRowKind::Pointed:
      return "pointed";
    case GridRowKind::Monotone:
      return "monotone";
    case GridRowKind::Submodular:
      return "submodular";
    case GridRowKind::Concavity:
      return "concavity";
    case GridRowKind::Crossing:
      return "crossing";
    case GridRowKind::Objective:
      return "objective";
  }
  return "unknown";
}

namespace {

constexpr double kNodeTie = 1e-12;

std::string node_suffix(std::size_t i, std::size_t j) { return std::to_string(i) + "_" + std::to_string(j); }

Curve2D as_curve(const Surface& surface) {
  if (const auto* h = std::get_if<Hyperplane>(&surface)) {
    if (h->dimension() != 2) throw std::invalid_argument("build_lp: grid LP needs a 2-D surface");
    return Curve2D::line(h->intercept(0), h->intercept(1));
  }
  return std::get<Curve2D>(surface);
}

// Cell index k with k h <= c <= (k+1) h; nodes within the tie tolerance snap.
long crossing_cell(double c, double h) {
  const double q = c / h;
  const double nearest = std::round(q);
  if (std::abs(c - nearest * h) <= kNodeTie) return static_cast<long>(nearest);
  return static_cast<long>(std::floor(q));
}

class RowBuilder {
 public:
  explicit RowBuilder(GridLP& lp) : lp_(lp) {}

  void add(GridRowKind kind, std::string name, std::vector<std::pair<std::size_t, double>> terms,
           RowSense sense, double rhs) {
    lp_.program.rows.push_back(LpRow{std::move(terms), sense, rhs});
    lp_.kinds.push_back(kind);
    lp_.names.push_back(std::move(name));
  }

 private:
  GridLP& lp_;
};

}  // namespace

GridLP build_lp(const Surface& surface, std::size_t m) {
  if (m < kMinGrid || m > kMaxGrid) {
    throw std::invalid_argument("build_lp: m must lie in [" + std::to_string(kMinGrid) + ", " +
                                std::to_string(kMaxGrid) + "], got " + std::to_string(m));
  }
  const auto report = validate(surface);
  if (!report.valid) throw std::invalid_argument("build_lp: surface fails validation (" + report.violations.front() + ")");
  const Curve2D curve = as_curve(surface);

  GridLP lp;
  lp.m = m;
  lp.X = curve.a();
  lp.Y = curve.b();
  lp.hx = lp.X / static_cast<double>(m);
  lp.hy = lp.Y / static_cast<double>(m);
  lp.program.num_vars = (m + 1) * (m + 1) + 1;
  lp.program.objective.assign(lp.program.num_vars, 0.0);
  lp.program.objective[lp.t_var()] = 1.0;

  RowBuilder rows(lp);
  const auto f = [&](std::size_t i, std::size_t j) { return lp.var(i, j); };
  using R = RowSense;

  rows.add(GridRowKind::Pointed, "pointed", {{f(0, 0), 1.0}}, R::Equal, 0.0);

  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i < m) rows.add(GridRowKind::Monotone, "mono_x_" + node_suffix(i, j), {{f(i + 1, j), 1.0}, {f(i, j), -1.0}}, R::GreaterEqual, 0.0);
      if (j < m) rows.add(GridRowKind::Monotone, "mono_y_" + node_suffix(i, j), {{f(i, j + 1), 1.0}, {f(i, j), -1.0}}, R::GreaterEqual, 0.0);
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      rows.add(GridRowKind::Submodular, "submod_" + node_suffix(i, j),
               {{f(i + 1, j), 1.0}, {f(i, j + 1), 1.0}, {f(i, j), -1.0}, {f(i + 1, j + 1), -1.0}}, R::GreaterEqual,
               0.0);
    }
  }

  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i + 2 <= m) {
        rows.add(GridRowKind::Concavity, "concave_x_" + node_suffix(i, j),
                 {{f(i + 1, j), 2.0}, {f(i, j), -1.0}, {f(i + 2, j), -1.0}}, R::GreaterEqual, 0.0);
      }
      if (j + 2 <= m) {
        rows.add(GridRowKind::Concavity, "concave_y_" + node_suffix(i, j),
                 {{f(i, j + 1), 2.0}, {f(i, j), -1.0}, {f(i, j + 2), -1.0}}, R::GreaterEqual, 0.0);
      }
    }
  }

  const auto in_range = [m](long k) { return k >= 1 && static_cast<std::size_t>(k) + 2 <= m; };
  // Horizontal lines y = j h_y with 0 < y < Y cross the curve at x = beta(y).
  for (std::size_t j = 1; j < m; ++j) {
    const long k = crossing_cell(curve.beta(static_cast<double>(j) * lp.hy), lp.hx);
    if (!in_range(k)) continue;
    const auto u = static_cast<std::size_t>(k);
    rows.add(GridRowKind::Crossing, "cross_x_" + node_suffix(u, j),
             {{f(u, j), 1.0}, {f(u - 1, j), -1.0}, {f(u + 2, j), -1.0}, {f(u + 1, j), 1.0}}, R::GreaterEqual, lp.hx);
    ++lp.crossing_rows;
  }
  for (std::size_t i = 1; i < m; ++i) {
    const long k = crossing_cell(curve.alpha(static_cast<double>(i) * lp.hx), lp.hy);
    if (!in_range(k)) continue;
    const auto u = static_cast<std::size_t>(k);
    rows.add(GridRowKind::Crossing, "cross_y_" + node_suffix(i, u),
             {{f(i, u), 1.0}, {f(i, u - 1), -1.0}, {f(i, u + 2), -1.0}, {f(i, u + 1), 1.0}}, R::GreaterEqual, lp.hy);
    ++lp.crossing_rows;
  }
  if (lp.crossing_rows == 0) {
    lp.warnings.push_back("grid too coarse: no crossing rows, LP bound is trivially 0");
  }

  rows.add(GridRowKind::Objective, "obj_x", {{lp.t_var(), lp.hx}, {f(1, 0), -1.0}}, R::GreaterEqual, 0.0);
  rows.add(GridRowKind::Objective, "obj_y", {{lp.t_var(), lp.hy}, {f(0, 1), -1.0}}, R::GreaterEqual, 0.0);
  return lp;
}

LpSolution solve_lp(const GridLP& lp, LpMethod method) { return solve(lp.program, method); }

std::vector<double> restrict_to_grid(const ELExpr& expr, const GridLP& lp) {
  if (expr.dimension() != 2) throw std::invalid_argument("restrict_to_grid: expression must be 2-D");
  std::vector<double> x(lp.program.num_vars, 0.0);
  for (std::size_t i = 0; i <= lp.m; ++i) {
    for (std::size_t j = 0; j <= lp.m; ++j) {
      const double p[2] = {static_cast<double>(i) * lp.hx, static_cast<double>(j) * lp.hy};
      x[lp.var(i, j)] = eval(expr, p);
    }
  }
  x[lp.t_var()] = std::max(x[lp.var(1, 0)] / lp.hx, x[lp.var(0, 1)] / lp.hy);
  return x;
}

RowCheck check_assignment(const GridLP& lp, std::span<const double> assignment) {
  if (assignment.size() != lp.program.num_vars) throw std::invalid_argument("check_assignment: size mismatch");
  RowCheck out;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (-assignment[j] > out.max_violation) {
      out.max_violation = -assignment[j];
      out.worst_row = "bound_" + std::to_string(j);
    }
  }
  for (std::size_t r = 0; r < lp.program.rows.size(); ++r) {
    const auto& row = lp.program.rows[r];
    double lhs = 0.0;
    for (const auto& [j, v] : row.terms) lhs += v * assignment[j];
    const double gap = lhs - row.rhs;
    const double violation = row.sense == RowSense::Equal ? std::abs(gap) : -gap;
    if (violation > out.max_violation) {
      out.max_violation = violation;
      out.worst_row = lp.names[r];
    }
  }
  return out;
}

namespace {

std::string number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string var_name(const GridLP& lp, std::size_t v) {
  if (v == lp.t_var()) return "t";
  return "f_" + node_suffix(v / (lp.m + 1), v % (lp.m + 1));
}

}  // namespace

void write_lp_format(const GridLP& lp, std::ostream& out) {
  out << "\\ grid LP, m = " << lp.m << ", box " << number(lp.X) << " x " << number(lp.Y) << "\n";
  out << "Minimize\n obj: t\nSubject To\n";
  for (std::size_t r = 0; r < lp.program.rows.size(); ++r) {
    const auto& row = lp.program.rows[r];
    out << ' ' << lp.names[r] << ':';
    bool first = true;
    for (const auto& [j, v] : row.terms) {
      if (v < 0.0) {
        out << " - ";
      } else if (!first) {
        out << " + ";
      } else {
        out << ' ';
      }
      const double mag = std::abs(v);
      if (mag != 1.0) out << number(mag) << ' ';
      out << var_name(lp, j);
      first = false;
    }
    out << (row.sense == RowSense::Equal ? " = " : " >= ") << number(row.rhs) << '\n';
  }
  out << "End\n";
}

}  // namespace elopt
