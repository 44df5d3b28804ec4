#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shuttle/classical.hpp"
#include "shuttle/path.hpp"
#include "shuttle/potential.hpp"

namespace shuttle {

/// Which lattice parameter fluctuates: Position shifts the phase (phi - lambda xi),
/// Amplitude scales the depth (A (1 + lambda xi)), Wavenumber scales K (K (1 + lambda xi)).
enum class NoiseTarget { Position, Amplitude, Wavenumber };

const char* to_string(NoiseTarget target) noexcept;
NoiseTarget noise_target_from_string(const std::string& name);

struct WhiteNoise {
  double intensity = 1.0;  // D
};

struct OUNoise {
  double variance = 1.0;          // c
  double correlation_time = 1.0;  // tau_c
};

using NoiseKind = std::variant<WhiteNoise, OUNoise>;

struct NoiseModel {
  NoiseTarget target = NoiseTarget::Position;
  NoiseKind kind = WhiteNoise{};
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

void validate(const NoiseModel& model);

/// Seed of realization `index` in an ensemble seeded with `seed`. Indices are mixed
/// through splitmix64 so nearby ensemble seeds do not share realizations.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Exact OU update with a stationary start x_0 ~ N(0, c). c == 0 gives zeros.
std::vector<double> generate_ou(double dt, std::size_t n, double variance, double correlation_time,
                                std::uint64_t seed);

/// Independent normals of variance D / dt. D == 0 gives zeros.
std::vector<double> generate_white(double dt, std::size_t n, double intensity, std::uint64_t seed);

std::vector<double> generate_noise(const NoiseKind& kind, double dt, std::size_t n, std::uint64_t seed);

/// Two-sided spectral density S(omega) = int alpha(tau) e^{-i omega tau} d tau:
/// D for white noise, 2 c tau_c / (1 + omega^2 tau_c^2) for OU.
double analytic_psd(const NoiseKind& kind, double omega);

/// Smallest correlation time in the model (infinite for white noise).
double correlation_time(const NoiseKind& kind);

LatticePerturbation perturbation_for(NoiseTarget target, double lambda, double xi);

/// Welch estimate of the two-sided density above, reported on omega >= 0 without
/// folding negative frequencies in (so white noise reads D, not 2D).
class PsdEstimate {
 public:
  PsdEstimate(std::vector<double> omega, std::vector<double> power, std::size_t segments);

  const std::vector<double>& omega() const noexcept { return omega_; }
  const std::vector<double>& power() const noexcept { return power_; }
  std::size_t segments() const noexcept { return segments_; }
  /// Linear interpolation between bins.
  double at(double omega) const;

 private:
  std::vector<double> omega_;
  std::vector<double> power_;
  std::size_t segments_;
};

struct WelchOptions {
  std::size_t segment_length = 0;  // 0: largest power of two giving at least 8 segments
};

/// Hann-windowed segments with 50% overlap, at least 8 of them; no detrending.
PsdEstimate psd_estimate(std::span<const double> samples, double dt, const WelchOptions& options = {});

struct SensitivityOptions {
  std::size_t steps = 0;  // 0: from dt, or default_integration_steps refined to tau_c / 10
  double dt = 0.0;        // fixed step, e.g. to keep the discretization equal across a t_f scan
  bool quantum = false;
  bool antithetic = true;  // realizations in pairs (xi, -xi); cancels odd orders in lambda
  DrivingMode mode = DrivingMode::Plain;
  double hbar = 1.0;
  unsigned threads = 1;
};

struct SensitivityReport {
  double mean_excess_energy = 0.0;  // raw mean over realizations
  double standard_error = 0.0;
  std::size_t n_realizations = 0;
  double noiseless_excess = 0.0;
  std::size_t escaped = 0;
  std::size_t steps = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;

  /// Noise-induced part: mean minus the noiseless baseline.
  double delta() const noexcept { return mean_excess_energy - noiseless_excess; }
};

/// Monte Carlo over noise realizations; realization i draws from realization_seed(seed, i)
/// (pairs share the pair index when antithetic). Escapes in at least 1% of realizations abort.
SensitivityReport monte_carlo_sensitivity(const TrapPath& path, const PotentialModel& lattice,
                                          const NoiseModel& noise, std::size_t n_realizations,
                                          const SensitivityOptions& options = {});

/// Sensitivity for each duration; `make_path` builds the protocol for a given t_f.
std::vector<SensitivityReport> duration_scan(const std::function<TrapPath(double)>& make_path,
                                             std::span<const double> durations,
                                             const PotentialModel& lattice, const NoiseModel& noise,
                                             std::size_t n_realizations,
                                             const SensitivityOptions& options = {});

/// Least-squares slope of log y against log x.
double fit_power_law_exponent(std::span<const double> x, std::span<const double> y);

struct HeatingOptions {
  double duration = 0.0;        // 0: 100 trap periods
  std::size_t realizations = 1000;
  double initial_energy = -1.0;  // < 0: 0 for position noise, 1% of the depth otherwise
  std::size_t samples = 64;      // energy samples used in the fit
  unsigned threads = 1;
};

struct HeatingRate {
  double rate = 0.0;  // d<E>/dt
  double standard_error = 0.0;
  double psd = 0.0;  // analytic S at the relevant frequency
};

struct HeatingComparison {
  double omega0 = 0.0;
  double relevant_frequency = 0.0;  // omega0 for position noise, 2 omega0 otherwise
  HeatingRate first;
  HeatingRate second;
  double measured_ratio = 0.0;  // second / first
  double measured_ratio_error = 0.0;
  double psd_ratio = 0.0;
  double relative_deviation = 0.0;  // |measured / psd - 1|
  bool within_tolerance = false;     // relative_deviation <= 0.15
};

HeatingRate heating_rate(const PotentialModel& lattice, const NoiseModel& noise,
                         const HeatingOptions& options = {});

/// Static-trap heating under two noise settings of the same target, compared with the
/// ratio of their spectral densities at the frequency that drives the heating.
HeatingComparison heating_rate_check(const PotentialModel& lattice, const NoiseModel& first,
                                     const NoiseModel& second, const HeatingOptions& options = {});

}  // namespace shuttle
