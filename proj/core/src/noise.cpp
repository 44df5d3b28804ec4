#include <cmath>
#include <limits>
#include <random>

#include "shuttle/error.hpp"
#include "shuttle/noise.hpp"

namespace shuttle {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index));
}

const char* to_string(NoiseTarget target) noexcept {
  switch (target) {
    case NoiseTarget::Position:
      return "position";
    case NoiseTarget::Amplitude:
      return "amplitude";
    case NoiseTarget::Wavenumber:
      return "wavenumber";
  }
  return "unknown";
}

NoiseTarget noise_target_from_string(const std::string& name) {
  if (name == "position") return NoiseTarget::Position;
  if (name == "amplitude") return NoiseTarget::Amplitude;
  if (name == "wavenumber") return NoiseTarget::Wavenumber;
  throw InvalidArgument("unknown noise target '" + name + "'");
}

void validate(const NoiseModel& model) {
  require(std::isfinite(model.lambda) && model.lambda >= 0, "noise lambda must be >= 0");
  if (const auto* w = std::get_if<WhiteNoise>(&model.kind)) {
    require(std::isfinite(w->intensity) && w->intensity > 0, "white-noise intensity must be positive");
  } else {
    const auto& ou = std::get<OUNoise>(model.kind);
    require(std::isfinite(ou.variance) && ou.variance > 0, "OU variance must be positive");
    require(std::isfinite(ou.correlation_time) && ou.correlation_time > 0,
            "OU correlation time must be positive");
  }
}

std::vector<double> generate_ou(double dt, std::size_t n, double variance, double correlation_time,
                                std::uint64_t seed) {
  require(dt > 0 && correlation_time > 0, "OU generation needs dt > 0 and tau_c > 0");
  require(variance >= 0, "OU variance must be non-negative");
  std::vector<double> xi(n, 0.0);
  if (n == 0 || variance == 0.0) return xi;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double decay = std::exp(-dt / correlation_time);
  const double kick = std::sqrt(variance * -std::expm1(-2.0 * dt / correlation_time));
  xi[0] = std::sqrt(variance) * normal(rng);
  for (std::size_t i = 1; i < n; ++i) xi[i] = xi[i - 1] * decay + kick * normal(rng);
  return xi;
}

std::vector<double> generate_white(double dt, std::size_t n, double intensity, std::uint64_t seed) {
  require(dt > 0, "white-noise generation needs dt > 0");
  require(intensity >= 0, "white-noise intensity must be non-negative");
  std::vector<double> xi(n, 0.0);
  if (intensity == 0.0) return xi;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(intensity / dt));
  for (double& v : xi) v = normal(rng);
  return xi;
}

std::vector<double> generate_noise(const NoiseKind& kind, double dt, std::size_t n, std::uint64_t seed) {
  if (const auto* w = std::get_if<WhiteNoise>(&kind)) return generate_white(dt, n, w->intensity, seed);
  const auto& ou = std::get<OUNoise>(kind);
  return generate_ou(dt, n, ou.variance, ou.correlation_time, seed);
}

double analytic_psd(const NoiseKind& kind, double omega) {
  if (const auto* w = std::get_if<WhiteNoise>(&kind)) return w->intensity;
  const auto& ou = std::get<OUNoise>(kind);
  const double wt = omega * ou.correlation_time;
  return 2.0 * ou.variance * ou.correlation_time / (1.0 + wt * wt);
}

double correlation_time(const NoiseKind& kind) {
  if (const auto* ou = std::get_if<OUNoise>(&kind)) return ou->correlation_time;
  return std::numeric_limits<double>::infinity();
}

LatticePerturbation perturbation_for(NoiseTarget target, double lambda, double xi) {
  LatticePerturbation p;
  switch (target) {
    case NoiseTarget::Position:
      p.phase_shift = -lambda * xi;
      break;
    case NoiseTarget::Amplitude:
      p.amplitude_scale = 1.0 + lambda * xi;
      break;
    case NoiseTarget::Wavenumber:
      p.wavenumber_scale = 1.0 + lambda * xi;
      break;
  }
  return p;
}

}  // namespace shuttle
