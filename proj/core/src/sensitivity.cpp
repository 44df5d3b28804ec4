#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "shuttle/error.hpp"
#include "shuttle/grid.hpp"
#include "shuttle/noise.hpp"
#include "shuttle/parallel.hpp"
#include "shuttle/quantum.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {
namespace {

// Neumaier compensated sum, accumulated in index order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

struct Moments {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Mean and standard error of the mean, both in index order.
Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  CompensatedSum s;
  for (double x : v) s.add(x);
  m.mean = s.value() / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  CompensatedSum sq;
  for (double x : v) sq.add((x - m.mean) * (x - m.mean));
  m.standard_error = std::sqrt(sq.value() / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return m;
}

std::size_t sensitivity_steps(const TrapPath& path, const PotentialModel& lattice, const NoiseModel& noise,
                              const SensitivityOptions& options) {
  const double tf = duration_of(path);
  std::size_t steps = options.steps;
  if (steps == 0 && options.dt > 0) steps = static_cast<std::size_t>(std::ceil(tf / options.dt - 1e-9));
  if (steps == 0) {
    steps = default_integration_steps(lattice.frequency(), tf);
    const double tau = correlation_time(noise.kind);
    if (std::isfinite(tau)) {
      steps = std::max(steps, static_cast<std::size_t>(std::ceil(10.0 * tf / tau)));
    }
  }
  steps = align_steps_to_breakpoints(path, std::max(steps, kMinIntegrationSteps));
  const double dt = tf / static_cast<double>(steps);
  const double tau = correlation_time(noise.kind);
  if (std::isfinite(tau) && dt > tau / 10.0 * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "noise step " << dt << " exceeds tau_c / 10 = " << tau / 10.0;
    throw InvalidArgument(msg.str());
  }
  return steps;
}

}  // namespace

SensitivityReport monte_carlo_sensitivity(const TrapPath& path, const PotentialModel& lattice,
                                          const NoiseModel& noise, std::size_t n_realizations,
                                          const SensitivityOptions& options) {
  require(lattice.is_lattice(), "noise sensitivity is defined for lattice potentials");
  validate(noise);
  require(n_realizations >= 2, "at least two realizations are needed");
  require(!options.antithetic || n_realizations % 2 == 0,
          "antithetic sampling needs an even number of realizations");

  const double tf = duration_of(path);
  const std::size_t steps = sensitivity_steps(path, lattice, noise, options);
  const double dt = tf / static_cast<double>(steps);
  const double x_start = initial_position(path);
  const double x_end = final_position(path);

  std::optional<QuantumState> psi0;
  double final_ground = 0.0;
  if (options.quantum) {
    const Grid grid = transport_grid(path, lattice, options.hbar);
    psi0 = ground_state(lattice, grid, x_start, options.hbar).state;
    final_ground = ground_state(lattice, grid, x_end, options.hbar).energy;
  }

  // Final excess energy under a given modulation; nullopt when the particle escaped.
  const auto run = [&](const PotentialModulation& modulation) -> std::optional<double> {
    try {
      if (options.quantum) {
        QuantumOptions q;
        q.mode = options.mode;
        q.dt = dt;
        q.modulation = modulation;
        const QuantumRun r = propagate_quantum(path, lattice, *psi0, options.hbar, q);
        return energy_expectation(r.state, lattice, x_end, options.hbar) - final_ground;
      }
      ClassicalOptions c;
      c.mode = options.mode;
      c.modulation = modulation;
      return integrate_classical(path, lattice, rest_state(lattice, x_start), steps, c)
          .report.final_excess_energy;
    } catch (const EscapeError&) {
      return std::nullopt;
    }
  };

  SensitivityReport report;
  report.steps = steps;
  report.dt = dt;
  report.seed = noise.seed;
  {
    const auto baseline = run({});
    if (!baseline) throw EscapeError("particle escapes even without noise", tf);
    report.noiseless_excess = *baseline;
  }

  const std::size_t group = options.antithetic ? 2 : 1;
  const std::size_t units = n_realizations / group;
  std::vector<std::optional<double>> deviation(units);
  parallel_for(units, options.threads, [&](std::size_t u) {
    const auto xi = generate_noise(noise.kind, dt, steps, realization_seed(noise.seed, u));
    double total = 0.0;
    for (std::size_t member = 0; member < group; ++member) {
      const double sign = member == 0 ? 1.0 : -1.0;
      const auto value = run([&](std::size_t step) {
        return perturbation_for(noise.target, noise.lambda, sign * xi[step]);
      });
      if (!value) return;
      total += *value - report.noiseless_excess;
    }
    deviation[u] = total / static_cast<double>(group);
  });

  std::vector<double> kept;
  kept.reserve(units);
  for (const auto& d : deviation) {
    if (d) kept.push_back(*d);
  }
  report.escaped = (units - kept.size()) * group;
  if (static_cast<double>(report.escaped) >= 0.01 * static_cast<double>(n_realizations)) {
    std::ostringstream msg;
    msg << report.escaped << " of " << n_realizations
        << " realizations escaped the lattice well; reduce lambda";
    throw EscapeError(msg.str(), tf);
  }
  const Moments m = moments(kept);
  report.n_realizations = kept.size() * group;
  report.mean_excess_energy = report.noiseless_excess + m.mean;
  report.standard_error = m.standard_error;
  return report;
}

std::vector<SensitivityReport> duration_scan(const std::function<TrapPath(double)>& make_path,
                                             std::span<const double> durations,
                                             const PotentialModel& lattice, const NoiseModel& noise,
                                             std::size_t n_realizations,
                                             const SensitivityOptions& options) {
  require(!durations.empty(), "duration scan needs at least one duration");
  std::vector<SensitivityReport> out;
  out.reserve(durations.size());
  for (double tf : durations) {
    out.push_back(monte_carlo_sensitivity(make_path(tf), lattice, noise, n_realizations, options));
  }
  return out;
}

double fit_power_law_exponent(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "power-law fit needs matching arrays of >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, "power-law fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  require(sxx > 0, "power-law fit needs distinct x values");
  return sxy / sxx;
}

HeatingRate heating_rate(const PotentialModel& lattice, const NoiseModel& noise, const HeatingOptions& options) {
  require(lattice.is_lattice(), "heating rates are defined for lattice potentials");
  validate(noise);
  require(options.realizations >= 4 && options.realizations % 2 == 0,
          "heating fits need an even number of realizations (antithetic pairs), at least 4");
  require(options.samples >= 8, "heating fits need at least 8 samples");

  const double omega0 = lattice.frequency();
  const double m = lattice.mass();
  const double duration = options.duration > 0 ? options.duration : 100.0 * 2.0 * std::numbers::pi / omega0;
  const double depth = std::get<Lattice>(lattice.shape()).depth;
  const double e0 = options.initial_energy >= 0 ? options.initial_energy
                    : noise.target == NoiseTarget::Position ? 0.0
                                                            : 0.01 * depth;
  const double amplitude = std::sqrt(2.0 * e0 / (m * omega0 * omega0));

  double dt = 2.0 * std::numbers::pi / (100.0 * omega0);
  dt = std::min(dt, correlation_time(noise.kind) / 10.0);
  std::size_t steps = static_cast<std::size_t>(std::ceil(duration / dt));
  steps = (steps + options.samples - 1) / options.samples * options.samples;
  steps = std::max(steps, kMinIntegrationSteps);
  dt = duration / static_cast<double>(steps);
  const std::size_t every = steps / options.samples;

  const TrapPath trap = PolyPath({0.0}, duration, PathRole::Trap);
  const double well = lattice.well_center();
  const std::size_t pairs = options.realizations / 2;

  // Per-pair mean energy series; the fitted slope is linear in the data, so the slope
  // of the ensemble mean is the mean of the per-pair slopes.
  std::vector<double> times(options.samples + 1);
  for (std::size_t s = 0; s <= options.samples; ++s) times[s] = dt * static_cast<double>(s * every);
  double t_mean = 0, t_var = 0;
  for (double t : times) t_mean += t;
  t_mean /= static_cast<double>(times.size());
  for (double t : times) t_var += (t - t_mean) * (t - t_mean);

  std::vector<double> slopes(pairs);
  parallel_for(pairs, options.threads, [&](std::size_t u) {
    const std::uint64_t seed = realization_seed(noise.seed, u);
    const auto xi = generate_noise(noise.kind, dt, steps, seed);
    std::mt19937_64 phase_rng(seed ^ 0x9E3779B97F4A7C15ULL);
    const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(phase_rng);
    const ClassicalState start{well + amplitude * std::cos(phase), -m * omega0 * amplitude * std::sin(phase)};

    std::vector<double> energy(times.size(), 0.0);
    for (double sign : {1.0, -1.0}) {
      ClassicalOptions c;
      c.record_every = every;
      c.modulation = [&](std::size_t step) { return perturbation_for(noise.target, noise.lambda, sign * xi[step]); };
      const ClassicalRun r = integrate_classical(trap, lattice, start, steps, c);
      for (std::size_t s = 0; s < times.size(); ++s) {
        energy[s] += 0.5 * excess_energy(lattice, {r.trajectory.q[s], r.trajectory.p[s]}, 0.0);
      }
    }
    double sxy = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) sxy += (times[s] - t_mean) * energy[s];
    slopes[u] = sxy / t_var;
  });

  const Moments mo = moments(slopes);
  const double relevant = noise.target == NoiseTarget::Position ? omega0 : 2.0 * omega0;
  return HeatingRate{mo.mean, mo.standard_error, analytic_psd(noise.kind, relevant)};
}

HeatingComparison heating_rate_check(const PotentialModel& lattice, const NoiseModel& first,
                                     const NoiseModel& second, const HeatingOptions& options) {
  require(first.target == second.target, "heating comparison needs one noise target for both settings");
  HeatingComparison out;
  out.omega0 = lattice.frequency();
  out.relevant_frequency = first.target == NoiseTarget::Position ? out.omega0 : 2.0 * out.omega0;
  out.first = heating_rate(lattice, first, options);
  out.second = heating_rate(lattice, second, options);
  require(out.first.rate > 0, "reference heating rate is not positive; raise lambda or the duration");
  out.measured_ratio = out.second.rate / out.first.rate;
  out.measured_ratio_error =
      std::abs(out.measured_ratio) * std::hypot(out.first.standard_error / out.first.rate,
                                                out.second.standard_error / std::max(std::abs(out.second.rate), 1e-300));
  out.psd_ratio = (second.lambda * second.lambda * out.second.psd) / (first.lambda * first.lambda * out.first.psd);
  out.relative_deviation = std::abs(out.measured_ratio / out.psd_ratio - 1.0);
  out.within_tolerance = out.relative_deviation <= 0.15;
  return out;
}

}  // namespace shuttle
