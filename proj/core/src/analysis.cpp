#include "elopt/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "elopt/sampling.hpp"

namespace elopt {

namespace {

constexpr std::size_t kChunkSize = 256;
constexpr double kLimitTolerance = 1e-6;

enum PropertyIndex : std::size_t {
  kSubmodularity,
  kDiminishingReturns,
  kMonotone,
  kPointed,
  kDirectionalConcavity,
  kDerivativeOrder,
  kDerivativeMonotonicity,
  kLemmaLimits,
  kPropertyCount,
};

constexpr const char* kPropertyNames[kPropertyCount] = {
    "submodularity",          "diminishing_returns",     "monotone",      "pointed",
    "directional_concavity",  "derivative_order",        "derivative_monotonicity", "lemma1_limits",
};

struct Tally {
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> witness;
  std::size_t checks = 0;

  void record(double violation, std::initializer_list<std::span<const double>> points) {
    ++checks;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    if (violation > worst) {
      worst = violation;
      witness.clear();
      for (auto p : points) witness.emplace_back(p.begin(), p.end());
    }
  }

  void merge(const Tally& other) {
    checks += other.checks;
    if (other.worst > worst) {
      worst = other.worst;
      witness = other.witness;
    }
  }
};

using Tallies = std::array<Tally, kPropertyCount>;

class SuiteChunk {
 public:
  SuiteChunk(const ScalarField& field, std::span<const double> box, std::uint64_t seed, std::size_t chunk)
      : field_(field), box_(box), rng_(seed, chunk), n_(field.dimension) {}

  void run(std::size_t count, Tallies& out) {
    for (std::size_t s = 0; s < count; ++s) sample_once(out);
  }

 private:
  double f(std::span<const double> x) const { return field_.value(x); }
  OneSidedGrad partials(std::span<const double> x) const { return field_.partials(x); }

  std::vector<double> random_point() {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = rng_.below(8) == 0 ? 0.0 : rng_.uniform(0.0, box_[i]);
    return x;
  }

  // y >= x, sharing some coordinates with x.
  std::vector<double> random_above(std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t i = 0; i < n_; ++i) {
      if (rng_.below(4) != 0) y[i] += rng_.uniform() * std::max(box_[i] - x[i], 0.25 * box_[i]);
    }
    return y;
  }

  void sample_once(Tallies& t) {
    const std::vector<double> x = random_point();
    const std::vector<double> y = random_point();

    {
      std::vector<double> lo(n_), hi(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        lo[i] = std::min(x[i], y[i]);
        hi[i] = std::max(x[i], y[i]);
      }
      t[kSubmodularity].record(f(lo) + f(hi) - f(x) - f(y), {x, y});
    }

    const std::vector<double> above = random_above(x);
    const double fx = f(x);
    const double fa = f(above);

    // Diminishing returns along one coordinate, for a pair differing only
    // there and for an arbitrary ordered pair.
    {
      const std::size_t i = rng_.below(n_);
      const double eps = rng_.uniform(0.0, box_[i]) + 1e-9 * box_[i];
      std::vector<double> y1(x);
      y1[i] += rng_.uniform(0.0, box_[i]) + 1e-9 * box_[i];
      auto gain = [&](std::span<const double> p, double fp) {
        std::vector<double> q(p.begin(), p.end());
        q[i] += eps;
        return f(q) - fp;
      };
      t[kDiminishingReturns].record(gain(y1, f(y1)) - gain(x, fx), {x, y1});
      t[kDiminishingReturns].record(gain(above, fa) - gain(x, fx), {x, above});
    }

    t[kMonotone].record(fx - fa, {x, above});

    {
      const double lambda = rng_.uniform();
      std::vector<double> mid(n_);
      for (std::size_t i = 0; i < n_; ++i) mid[i] = lambda * x[i] + (1.0 - lambda) * above[i];
      t[kDirectionalConcavity].record(lambda * fx + (1.0 - lambda) * fa - f(mid), {x, above});
    }

    const OneSidedGrad gx = partials(x);
    const OneSidedGrad ga = partials(above);
    {
      double v = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_; ++i) {
        if (!std::isfinite(gx.right[i])) v = std::numeric_limits<double>::infinity();
        v = std::max(v, -gx.right[i]);
        if (gx.defined_left[i]) {
          if (!std::isfinite(gx.left[i])) v = std::numeric_limits<double>::infinity();
          v = std::max(v, gx.right[i] - gx.left[i]);
        }
      }
      t[kDerivativeOrder].record(v, {x});
    }
    {
      double v = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_; ++i) v = std::max(v, ga.right[i] - gx.right[i]);
      t[kDerivativeMonotonicity].record(v, {x, above});
    }

    lemma_limits(t[kLemmaLimits]);
  }

  // Forward probes f_i^+(x + e e_i) increase towards f_i^+(x) and backward
  // probes f_i^+(x - e e_i) decrease towards f_i^-(x) as e shrinks. Monotone
  // breaches are absolute; the final gap is relative to the limit.
  void lemma_limits(Tally& tally) {
    std::vector<double> x = random_point();
    const std::size_t i = rng_.below(n_);
    x[i] = 2.0 * kLimitSteps[0] + rng_.uniform(0.0, box_[i]);
    const OneSidedGrad g = partials(x);
    auto right_at = [&](double offset) {
      std::vector<double> p(x);
      p[i] += offset;
      return partials(p).right[i];
    };
    double violation = -std::numeric_limits<double>::infinity();
    double prev_fwd = 0.0;
    double prev_bwd = 0.0;
    constexpr std::size_t steps = std::size(kLimitSteps);
    for (std::size_t k = 0; k < steps; ++k) {
      const double fwd = right_at(kLimitSteps[k]);
      const double bwd = right_at(-kLimitSteps[k]);
      if (k > 0) {
        violation = std::max(violation, prev_fwd - fwd);
        violation = std::max(violation, bwd - prev_bwd);
      }
      violation = std::max(violation, fwd - g.right[i]);
      violation = std::max(violation, g.left[i] - bwd);
      if (k + 1 == steps) {
        violation = std::max(violation, std::abs(fwd - g.right[i]) / std::max(1.0, std::abs(g.right[i])));
        violation = std::max(violation, std::abs(bwd - g.left[i]) / std::max(1.0, std::abs(g.left[i])));
      }
      prev_fwd = fwd;
      prev_bwd = bwd;
    }
    tally.record(violation, {x});
  }

  const ScalarField& field_;
  std::span<const double> box_;
  SampleStream rng_;
  std::size_t n_;
};

std::size_t chunk_count(std::size_t samples) { return (samples + kChunkSize - 1) / kChunkSize; }

std::size_t chunk_length(std::size_t samples, std::size_t chunk) {
  return std::min(kChunkSize, samples - chunk * kChunkSize);
}

}  // namespace

bool ELReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed; });
}

const PropertyVerdict& ELReport::property(std::string_view name) const {
  for (const auto& p : properties) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no property named '" + std::string(name) + "'");
}

ScalarField as_field(const ELExpr& expr) {
  return ScalarField{expr.dimension(), [expr](std::span<const double> x) { return eval(expr, x); },
                     [expr](std::span<const double> x) { return one_sided_partials(expr, x); }};
}

ELReport check_el(const ELExpr& expr, std::span<const double> box, const SuiteOptions& options) {
  return check_el(as_field(expr), box, options);
}

ELReport check_el(const ScalarField& field, std::span<const double> box, const SuiteOptions& options) {
  if (!field.value || !field.partials) throw std::invalid_argument("check_el: field needs value and partials");
  if (box.size() != field.dimension) throw std::invalid_argument("check_el: box dimension mismatch");
  for (double b : box) {
    if (!std::isfinite(b) || !(b > 0.0)) throw std::invalid_argument("check_el: box must be strictly positive");
  }

  const std::size_t chunks = chunk_count(options.samples);
  std::vector<Tallies> per_chunk(chunks);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < chunks; c += stride) {
      SuiteChunk(field, box, options.seed, c).run(chunk_length(options.samples, c), per_chunk[c]);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(chunks)));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  Tallies total;
  for (const auto& t : per_chunk) {
    for (std::size_t p = 0; p < kPropertyCount; ++p) total[p].merge(t[p]);
  }
  {
    const std::vector<double> origin(field.dimension, 0.0);
    total[kPointed].record(std::abs(field.value(origin)), {origin});
  }

  ELReport report;
  report.samples = options.samples;
  report.seed = options.seed;
  report.tolerance = options.tolerance;
  for (std::size_t p = 0; p < kPropertyCount; ++p) {
    PropertyVerdict v;
    v.name = kPropertyNames[p];
    v.checks = total[p].checks;
    v.worst_violation = total[p].checks == 0 ? 0.0 : total[p].worst;
    const double tol = p == kLemmaLimits ? std::max(options.tolerance, kLimitTolerance) : options.tolerance;
    v.passed = v.worst_violation <= tol;
    if (!v.passed) v.witness = std::move(total[p].witness);
    report.properties.push_back(std::move(v));
  }
  return report;
}

FeasibilityReport check_feasible(const ELExpr& expr, const Surface& surface, std::size_t samples,
                                 std::uint64_t seed, double tolerance) {
  const std::size_t n = dimension(surface);
  if (expr.dimension() != n) throw std::invalid_argument("check_feasible: dimension mismatch");
  if (samples == 0) throw std::invalid_argument("check_feasible: need at least one sample");

  FeasibilityReport report;
  report.samples = samples;
  report.tolerance = tolerance;
  report.min_jump = std::numeric_limits<double>::infinity();

  std::vector<double> x(n);
  for (std::size_t c = 0; c < chunk_count(samples); ++c) {
    SampleStream rng(seed, c);
    for (std::size_t s = 0; s < chunk_length(samples, c); ++s) {
      if (const auto* h = std::get_if<Hyperplane>(&surface)) {
        std::vector<double> w(n);
        for (auto& wi : w) wi = rng.uniform(kSurfaceMargin, 1.0);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) x[i] = h->M * w[i] / (total * h->c[i]);
      } else {
        const auto& curve = std::get<Curve2D>(surface);
        const double margin = kSurfaceMargin * curve.a();
        x[0] = rng.uniform(margin, curve.a() - margin);
        x[1] = curve.alpha(x[0]);
      }
      const OneSidedGrad g = one_sided_partials(expr, x);
      for (std::size_t i = 0; i < n; ++i) {
        const double jump = g.left[i] - g.right[i];
        if (jump < report.min_jump || std::isnan(jump)) {
          report.min_jump = std::isnan(jump) ? -std::numeric_limits<double>::infinity() : jump;
          report.witness_point = x;
          report.witness_coordinate = i;
        }
      }
    }
  }
  report.feasible = report.min_jump >= 1.0 - tolerance;
  return report;
}

double finite_difference_step(std::span<const double> x) {
  double norm = 0.0;
  for (double xi : x) norm = std::max(norm, std::abs(xi));
  return 1e-5 * std::max(1.0, norm);
}

DerivativeReport check_derivatives(const ELExpr& expr, std::span<const double> box, std::size_t points,
                                   std::uint64_t seed, double tolerance) {
  const std::size_t n = expr.dimension();
  if (box.size() != n) throw std::invalid_argument("check_derivatives: box dimension mismatch");
  DerivativeReport report;
  report.tolerance = tolerance;
  const std::size_t max_attempts = 100 * std::max<std::size_t>(points, 1);
  SampleStream rng(seed, 0);
  std::vector<double> x(n);
  while (report.points_checked < points && report.attempts < max_attempts) {
    ++report.attempts;
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(0.0, box[i]);
    const double h = finite_difference_step(x);
    if (std::any_of(x.begin(), x.end(), [&](double xi) { return xi <= 2.0 * h; })) continue;

    const std::vector<int> sig = branch_signature(expr, x);
    auto shifted = [&](std::size_t i, double offset) {
      std::vector<double> p(x);
      p[i] += offset;
      return p;
    };
    bool smooth = true;
    for (std::size_t i = 0; i < n && smooth; ++i) {
      for (double off : {-2.0 * h, -h, h, 2.0 * h}) {
        if (branch_signature(expr, shifted(i, off)) != sig) {
          smooth = false;
          break;
        }
      }
    }
    if (!smooth) continue;

    const OneSidedGrad g = one_sided_partials(expr, x);
    const double f0 = eval(expr, x);
    for (std::size_t i = 0; i < n; ++i) {
      const double fwd = (-3.0 * f0 + 4.0 * eval(expr, shifted(i, h)) - eval(expr, shifted(i, 2.0 * h))) / (2.0 * h);
      const double bwd = (3.0 * f0 - 4.0 * eval(expr, shifted(i, -h)) + eval(expr, shifted(i, -2.0 * h))) / (2.0 * h);
      const double err = std::max(std::abs(fwd - g.right[i]) / std::max(1.0, std::abs(g.right[i])),
                                  std::abs(bwd - g.left[i]) / std::max(1.0, std::abs(g.left[i])));
      if (err > report.max_relative_error || std::isnan(err)) {
        report.max_relative_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
        report.witness_point = x;
      }
    }
    ++report.points_checked;
  }
  report.passed = report.points_checked == points && report.max_relative_error <= tolerance;
  return report;
}

namespace {

struct RatioCandidate {
  double value;
  std::size_t i;
  std::size_t j;
};

// Largest of n_x/n_y = s and n_y/n_x = 1/s for normal (s, 1).
RatioCandidate best_ratio(double slope) {
  const double inv = 1.0 / slope;
  if (slope >= inv) return {slope, 1, 0};
  return {inv, 0, 1};
}

}  // namespace

Theorem1Bound theorem1_bound(const Surface& surface) {
  if (const auto* h = std::get_if<Hyperplane>(&surface)) {
    if (h->c.empty()) throw std::invalid_argument("theorem1_bound: empty hyperplane");
    const auto lo = std::min_element(h->c.begin(), h->c.end());
    const auto hi = std::max_element(h->c.begin(), h->c.end());
    Theorem1Bound out;
    out.value = *hi / *lo;
    out.witness.i = static_cast<std::size_t>(lo - h->c.begin());
    out.witness.j = static_cast<std::size_t>(hi - h->c.begin());
    const double total = std::accumulate(h->c.begin(), h->c.end(), 0.0);
    out.witness.point.assign(h->c.size(), h->M / total);
    out.note = "constant normal";
    return out;
  }
  const auto& curve = std::get<Curve2D>(surface);
  if (!curve.has_monotone_slope()) return theorem1_bound_sampled(curve);

  const RatioCandidate at0 = best_ratio(-curve.alpha_prime(0.0));
  const RatioCandidate at_a = best_ratio(-curve.alpha_prime(curve.a()));
  const bool use_a = at_a.value > at0.value;
  const RatioCandidate& best = use_a ? at_a : at0;
  Theorem1Bound out;
  out.value = best.value;
  out.witness.i = best.i;
  out.witness.j = best.j;
  out.witness.closure_limit = true;
  out.witness.point = use_a ? std::vector<double>{curve.a(), 0.0} : std::vector<double>{0.0, curve.b()};
  out.note = "sup over closure";
  return out;
}

Theorem1Bound theorem1_bound_sampled(const Curve2D& curve, std::size_t samples) {
  samples = std::max<std::size_t>(samples, 2);
  const double a = curve.a();
  auto ratio = [&](double x) { return best_ratio(-curve.alpha_prime(x)).value; };
  std::size_t best_k = 0;
  double best_v = -1.0;
  for (std::size_t k = 0; k <= samples; ++k) {
    const double x = a * static_cast<double>(k) / static_cast<double>(samples);
    const double v = ratio(x);
    if (v > best_v) {
      best_v = v;
      best_k = k;
    }
  }
  const double step = a / static_cast<double>(samples);
  double lo = std::max(0.0, step * (static_cast<double>(best_k) - 1.0));
  double hi = std::min(a, step * (static_cast<double>(best_k) + 1.0));
  double best_x = a * static_cast<double>(best_k) / static_cast<double>(samples);

  // Golden-section search for the maximum inside the bracketing cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = ratio(c);
  double fd = ratio(d);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, a); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = ratio(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = ratio(d);
    }
  }
  for (double x : {lo, hi, 0.5 * (lo + hi)}) {
    if (ratio(x) > best_v) {
      best_v = ratio(x);
      best_x = x;
    }
  }
  const RatioCandidate best = best_ratio(-curve.alpha_prime(best_x));
  Theorem1Bound out;
  out.value = best.value;
  out.witness.i = best.i;
  out.witness.j = best.j;
  out.witness.point = {best_x, curve.alpha(best_x)};
  out.witness.closure_limit = best_x <= 0.0 || best_x >= a;
  out.note = out.witness.closure_limit ? "sup over closure (sampled)" : "interior maximum (sampled)";
  return out;
}

}  // namespace elopt
