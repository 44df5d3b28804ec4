#include "shuttle/oct.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "shuttle/classical.hpp"
#include "shuttle/error.hpp"
#include "shuttle/fourier.hpp"
#include "shuttle/parallel.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {
namespace {

// ---------------------------------------------------------------------------
// Nelder-Mead through GSL's nmsimplex2.

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> trace;
  bool converged = true;
};

using Objective = std::function<double(const std::vector<double>&)>;

double gsl_trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  std::vector<double> x(v->size);
  for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
  const double value = f(x);
  return std::isfinite(value) ? value : GSL_POSINF;
}

MinimizeResult nelder_mead(const Objective& f, const std::vector<double>& start, double step,
                           int max_iterations, double size_tolerance) {
  MinimizeResult out;
  out.x = start;
  out.value = f(start);
  out.trace.push_back(out.value);
  if (start.empty()) return out;

  const std::size_t n = start.size();
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> steps(gsl_vector_alloc(n), gsl_vector_free);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, start[i]);
  gsl_vector_set_all(steps.get(), step);

  gsl_multimin_function fn;
  fn.n = n;
  fn.f = gsl_trampoline;
  fn.params = const_cast<Objective*>(&f);

  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), steps.get());

  out.converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    out.trace.push_back(std::min(out.trace.back(), solver->fval));
    const double size = gsl_multimin_fminimizer_size(solver.get());
    if (gsl_multimin_test_size(size, size_tolerance) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  if (solver->fval < out.value) {
    out.value = solver->fval;
    for (std::size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(solver->x, i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference family u(s) = quintic(s) + s^3 (1-s)^3 sum_j z_j P_j(2s - 1), x_c = d u.

using Poly = std::vector<double>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly shifted_legendre(int n) {
  Poly c(static_cast<std::size_t>(n) + 1, 0.0);
  double binom_nk = 1.0, binom_nkk = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      binom_nk = binom_nk * (n - k + 1) / k;
      binom_nkk = binom_nkk * (n + k) / k;
    }
    c[static_cast<std::size_t>(k)] = (((n + k) % 2 == 0) ? 1.0 : -1.0) * binom_nk * binom_nkk;
  }
  return c;
}

Poly derivative(const Poly& p, int order) {
  Poly out = p;
  for (int r = 0; r < order; ++r) {
    if (out.size() <= 1) return {0.0};
    Poly next(out.size() - 1);
    for (std::size_t k = 1; k < out.size(); ++k) next[k - 1] = static_cast<double>(k) * out[k];
    out = std::move(next);
  }
  return out;
}

double horner(const Poly& p, double s) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * s + *it;
  return v;
}

class Family {
 public:
  Family(int free_parameters, std::size_t points) : points_(points) {
    require(free_parameters >= 0 && free_parameters <= 12, "free parameters must lie in [0, 12]");
    require(points >= 3 && points % 2 == 1, "family sampling needs an odd number of points");
    shapes_.push_back({0.0, 0.0, 0.0, 10.0, -15.0, 6.0});
    Poly bump{1.0};
    for (int i = 0; i < 3; ++i) bump = multiply(bump, {0.0, 1.0});
    for (int i = 0; i < 3; ++i) bump = multiply(bump, {1.0, -1.0});
    for (int j = 0; j < free_parameters; ++j) shapes_.push_back(multiply(bump, shifted_legendre(j)));
    for (int order = 0; order <= 4; ++order) {
      auto& table = samples_[static_cast<std::size_t>(order)];
      table.resize(shapes_.size());
      for (std::size_t b = 0; b < shapes_.size(); ++b) {
        const Poly d = derivative(shapes_[b], order);
        table[b].resize(points);
        for (std::size_t i = 0; i < points; ++i) table[b][i] = horner(d, s(i));
      }
    }
  }

  std::size_t dimension() const { return shapes_.size() - 1; }
  std::size_t points() const { return points_; }
  double s(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(points_ - 1); }

  /// d^order u / ds^order at every sample.
  std::vector<double> sampled(int order, const std::vector<double>& z) const {
    const auto& table = samples_[static_cast<std::size_t>(order)];
    std::vector<double> v = table[0];
    for (std::size_t j = 0; j < z.size(); ++j) {
      for (std::size_t i = 0; i < points_; ++i) v[i] += z[j] * table[j + 1][i];
    }
    return v;
  }

  PolyPath reference(const TransportTask& task, const std::vector<double>& z) const {
    Poly u(shapes_.back().size() > 6 ? shapes_.back().size() : 6, 0.0);
    for (std::size_t k = 0; k < shapes_[0].size(); ++k) u[k] += shapes_[0][k];
    for (std::size_t j = 0; j < z.size(); ++j) {
      for (std::size_t k = 0; k < shapes_[j + 1].size(); ++k) u[k] += z[j] * shapes_[j + 1][k];
    }
    while (u.size() > 6 && u.back() == 0.0) u.pop_back();
    for (double& c : u) c *= task.distance();
    return PolyPath(std::move(u), task.duration(), PathRole::Reference);
  }

 private:
  std::size_t points_;
  std::vector<Poly> shapes_;
  std::array<std::vector<std::vector<double>>, 5> samples_;
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Simpson weights over an odd number of uniform samples on [0, 1].
double simpson(const std::vector<double>& v) {
  const std::size_t n = v.size();
  double sum = v.front() + v.back();
  for (std::size_t i = 1; i + 1 < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
  return sum / (3.0 * static_cast<double>(n - 1));
}

struct BoundRatios {
  double displacement = 0.0;
  double first = 0.0;
  double second = 0.0;
  double worst() const { return std::max({displacement, first, second}); }
};

BoundRatios bound_ratios(const Family& family, const std::vector<double>& z, const TransportTask& task,
                         const ControlConstraint& c) {
  const double d = task.distance(), tf = task.duration(), w2 = task.omega() * task.omega();
  BoundRatios r;
  r.displacement = d * max_abs(family.sampled(2, z)) / (tf * tf * w2) / c.max_relative_displacement;
  if (c.max_first_derivative) {
    r.first = d * max_abs(family.sampled(3, z)) / (tf * tf * tf * w2) / *c.max_first_derivative;
  }
  if (c.max_second_derivative) {
    r.second = d * max_abs(family.sampled(4, z)) / (tf * tf * tf * tf * w2) / *c.max_second_derivative;
  }
  return r;
}

void validate_constraint(const ControlConstraint& c) {
  require(std::isfinite(c.max_relative_displacement) && c.max_relative_displacement > 0,
          "max relative displacement must be positive");
  if (c.max_first_derivative) require(*c.max_first_derivative > 0, "derivative bounds must be positive");
  if (c.max_second_derivative) require(*c.max_second_derivative > 0, "derivative bounds must be positive");
}

std::vector<double> restart_start(std::size_t dim, int restart, std::uint64_t seed, double spread) {
  std::vector<double> z(dim, 0.0);
  if (restart == 0) return z;
  std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(restart));
  std::normal_distribution<double> normal(0.0, spread);
  for (double& v : z) v = normal(rng);
  return z;
}

struct SmoothSearch {
  std::vector<double> z;
  double worst = 0.0;
};

// Minimises the worst bound ratio at the task's duration.
SmoothSearch search_smooth(const TransportTask& task, const ControlConstraint& c, const SmoothOptions& o) {
  const Family coarse(o.free_parameters, 1001);
  const Objective f = [&](const std::vector<double>& z) { return bound_ratios(coarse, z, task, c).worst(); };
  SmoothSearch best{std::vector<double>(coarse.dimension(), 0.0), f(std::vector<double>(coarse.dimension(), 0.0))};
  if (best.worst <= 1.0) return best;  // the quintic already satisfies every bound
  for (int r = 0; r < std::max(o.restarts, 1); ++r) {
    const auto start = restart_start(coarse.dimension(), r, 0x5eed, 0.5);
    const MinimizeResult m = nelder_mead(f, start, 0.2, o.max_iterations, 1e-10);
    if (m.value < best.worst) best = {m.x, m.value};
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------

BangBangResult min_time_bang_bang(const TransportTask& task, double delta) {
  require(std::isfinite(delta) && delta > 0, "delta must be positive");
  BangBangResult out;
  const double d = task.distance();
  const double omega = task.omega();
  out.min_duration = 2.0 / omega * std::sqrt(d / delta);
  if (d == 0.0) return out;

  const double a = omega * omega * delta;
  const double tf = out.min_duration;
  const double half = 0.5 * tf;
  out.reference = PiecewisePath({0.0, half, tf}, {{0.0, 0.0, 0.5 * a}, {0.5 * d, a * half, -0.5 * a}}, 0.0, d);
  out.trap = PiecewisePath({0.0, half, tf}, {{delta, 0.0, 0.5 * a}, {0.5 * d - delta, a * half, -0.5 * a}}, 0.0, d);

  const PotentialModel harmonic = PotentialModel::harmonic(task.mass(), omega);
  const ClassicalRun run = integrate_classical(*out.trap, harmonic, {0.0, 0.0},
                                               default_integration_steps(omega, tf));
  out.verified_excess = run.report.final_excess_energy / task.energy_scale();
  if (!(out.verified_excess <= 1e-8)) {
    std::ostringstream msg;
    msg << "bang-bang protocol left excess " << out.verified_excess << " (scaled)";
    throw NumericalError(msg.str());
  }
  return out;
}

SmoothResult constrained_smooth(const TransportTask& task, const ControlConstraint& constraint,
                                const SmoothOptions& options) {
  validate_constraint(constraint);
  require(options.verification_points >= 10001, "dense verification needs at least 10^4 points");
  const std::size_t dense_points = options.verification_points | 1;
  const Family dense(options.free_parameters, dense_points);

  const auto evaluate_at = [&](const TransportTask& t) {
    const SmoothSearch found = search_smooth(t, constraint, options);
    return std::make_pair(found, bound_ratios(dense, found.z, t, constraint));
  };

  const auto [found, ratios] = evaluate_at(task);
  const PolyPath reference = dense.reference(task, found.z);
  SmoothResult out{ratios.worst() <= 1.0, reference, trap_from_reference(reference, task)};
  const double w2 = task.omega() * task.omega();
  out.max_relative_displacement = ratios.displacement * constraint.max_relative_displacement;
  const double tf = task.duration(), d = task.distance();
  out.max_first_derivative = d * max_abs(dense.sampled(3, found.z)) / (tf * tf * tf * w2);
  out.max_second_derivative = d * max_abs(dense.sampled(4, found.z)) / (tf * tf * tf * tf * w2);
  out.slack = 1.0 - ratios.worst();

  std::ostringstream report;
  if (out.feasible) {
    report << "feasible at t_f = " << tf << "; worst bound ratio " << ratios.worst();
    out.report = report.str();
    return out;
  }

  // Bracket the smallest feasible duration, then bisect.
  double lo = tf, hi = tf;
  for (int i = 0;; ++i) {
    if (i == 40) throw NumericalError("no feasible duration found while bracketing");
    hi *= 2.0;
    if (evaluate_at(task.with_duration(hi)).second.worst() <= 1.0) break;
    lo = hi;
  }
  while ((hi - lo) > options.bisection_tolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    (evaluate_at(task.with_duration(mid)).second.worst() <= 1.0 ? hi : lo) = mid;
  }
  out.min_feasible_duration = hi;
  report << "infeasible at t_f = " << tf << " (worst bound ratio " << ratios.worst()
         << "); smallest feasible t_f found " << hi;
  out.report = report.str();
  return out;
}

CostBreakdown robust_cost(const TransportTask& task, const PolyPath& reference, const PolyPath& trap,
                          const RobustCostWeights& weights, const std::optional<PotentialModel>& gaussian) {
  const double d = task.distance(), tf = task.duration(), omega = task.omega(), m = task.mass();
  const double w2 = omega * omega;
  const std::size_t points = 2001;
  std::vector<double> lag(points), excursion_values(points);
  double peak_excursion = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = tf * static_cast<double>(i) / static_cast<double>(points - 1);
    lag[i] = reference.acceleration(t) / w2;  // x_0 - x_c
    const double x0 = trap.position(t);
    peak_excursion = std::max({peak_excursion, x0 - d, -x0});
  }

  CostBreakdown c;
  if (weights.frequency_window > 0) {
    const bool jumps = !starts_and_ends_at_rest(trap);
    std::vector<double> e(41);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double w = omega * (0.95 + 0.1 * static_cast<double>(i) / static_cast<double>(e.size() - 1));
      e[i] = excitation_from_transform(m, acceleration_transform(trap, w, jumps));
    }
    // int E d omega over a band of width 0.1 omega, per (1/2) m omega^2 d^2 * omega
    c.frequency_window = 0.1 * simpson(e) / task.energy_scale();
  }
  c.peak_displacement = max_abs(lag) / d;
  {
    std::vector<double> sq(points);
    for (std::size_t i = 0; i < points; ++i) sq[i] = (lag[i] / d) * (lag[i] / d);
    c.potential_energy = simpson(sq);  // time average of (1/2) m w^2 lag^2 over (1/2) m w^2 d^2
  }
  c.peak_excursion = std::max(0.0, peak_excursion) / d;
  if (weights.anharmonic_energy > 0) {
    require(gaussian && gaussian->is_gaussian(), "the anharmonic cost term needs a gaussian trap");
    const double wg = gaussian->frequency();
    std::vector<double> anh(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double y = -lag[i];  // x_c - x_0
      const double harmonic = gaussian->minimum_value() + 0.5 * m * wg * wg * y * y;
      anh[i] = std::abs(gaussian->value(y) - harmonic);
    }
    c.anharmonic_energy = simpson(anh) / task.energy_scale();
  }
  c.total = weights.frequency_window * c.frequency_window + weights.peak_displacement * c.peak_displacement +
            weights.potential_energy * c.potential_energy + weights.peak_excursion * c.peak_excursion +
            weights.anharmonic_energy * c.anharmonic_energy;
  return c;
}

RobustResult optimize_robust_cost(const TransportTask& task, const RobustCostWeights& weights,
                                  const RobustOptions& options) {
  const double ws[] = {weights.frequency_window, weights.peak_displacement, weights.potential_energy,
                       weights.peak_excursion, weights.anharmonic_energy};
  bool any = false;
  for (double w : ws) {
    require(std::isfinite(w) && w >= 0, "cost weights must be non-negative");
    any = any || w > 0;
  }
  require(any, "at least one cost weight must be positive");
  require(task.distance() > 0, "robust-cost optimisation needs a non-zero transport distance");
  require(options.restarts >= 1, "at least one restart is needed");

  const Family family(options.free_parameters, 3);
  const auto cost_of = [&](const std::vector<double>& z) {
    const PolyPath ref = family.reference(task, z);
    return robust_cost(task, ref, trap_from_reference(ref, task), weights, options.gaussian);
  };
  const Objective f = [&](const std::vector<double>& z) { return cost_of(z).total; };

  const std::size_t dim = family.dimension();
  std::vector<MinimizeResult> runs(static_cast<std::size_t>(options.restarts));
  parallel_for(runs.size(), options.threads, [&](std::size_t r) {
    runs[r] = nelder_mead(f, restart_start(dim, static_cast<int>(r), options.seed, 0.3), 0.1,
                          options.max_iterations, 1e-9);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].value < runs[best].value) best = r;
  }

  std::vector<double> z = runs[best].x;
  const CostBreakdown seed_cost = cost_of(std::vector<double>(dim, 0.0));
  if (!(runs[best].value <= seed_cost.total)) z.assign(dim, 0.0);

  const PolyPath reference = family.reference(task, z);
  RobustResult out{reference, trap_from_reference(reference, task), cost_of(z), seed_cost};
  out.trace = runs[best].trace;
  out.converged = runs[best].converged;
  if (!out.converged) {
    out.warning = "simplex did not converge within " + std::to_string(options.max_iterations) +
                  " iterations; returning the best point found";
  }

  const PotentialModel harmonic = PotentialModel::harmonic(task.mass(), task.omega());
  const ClassicalRun run = integrate_classical(out.trap, harmonic, {0.0, 0.0},
                                               default_integration_steps(task.omega(), task.duration()));
  out.nominal_excess = run.report.final_excess_energy / task.energy_scale();
  if (!(out.nominal_excess <= 1e-8)) {
    std::ostringstream msg;
    msg << "optimised protocol is not excitation-free (scaled excess " << out.nominal_excess << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace shuttle
