#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include "detail/fft.hpp"
#include "shuttle/error.hpp"
#include "shuttle/noise.hpp"

namespace shuttle {

PsdEstimate::PsdEstimate(std::vector<double> omega, std::vector<double> power, std::size_t segments)
    : omega_(std::move(omega)), power_(std::move(power)), segments_(segments) {
  require(omega_.size() == power_.size() && omega_.size() >= 2, "PSD needs matching arrays");
}

double PsdEstimate::at(double omega) const {
  require(omega >= 0 && omega <= omega_.back(), "frequency outside the estimated band");
  const double step = omega_[1] - omega_[0];
  const auto i = std::min(static_cast<std::size_t>(omega / step), omega_.size() - 2);
  const double s = (omega - omega_[i]) / step;
  return (1.0 - s) * power_[i] + s * power_[i + 1];
}

PsdEstimate psd_estimate(std::span<const double> samples, double dt, const WelchOptions& options) {
  require(dt > 0, "PSD estimation needs dt > 0");
  const std::size_t n = samples.size();
  std::size_t len = options.segment_length;
  if (len == 0) {
    // 8 segments at 50% overlap span 4.5 segment lengths.
    len = std::bit_floor(static_cast<std::size_t>(static_cast<double>(n) / 4.5));
  }
  require(len >= 16, "too few samples for a Welch estimate with 8 segments");
  const std::size_t hop = len / 2;
  const std::size_t segments = n >= len ? (n - len) / hop + 1 : 0;
  if (segments < 8) {
    throw InvalidArgument("Welch estimate needs at least 8 segments; got " + std::to_string(segments));
  }

  std::vector<double> window(len);
  double window_power = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    window[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(len));
    window_power += window[j] * window[j];
  }

  const std::size_t bins = len / 2 + 1;
  std::vector<double> power(bins, 0.0);
  detail::Fft fft(len);
  std::vector<std::complex<double>> work(len);
  for (std::size_t s = 0; s < segments; ++s) {
    const std::size_t offset = s * hop;
    for (std::size_t j = 0; j < len; ++j) work[j] = samples[offset + j] * window[j];
    fft.forward(work);
    for (std::size_t k = 0; k < bins; ++k) power[k] += std::norm(work[k]);
  }
  const double scale = dt / (window_power * static_cast<double>(segments));
  std::vector<double> omega(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    power[k] *= scale;
    omega[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(len) * dt);
  }
  return PsdEstimate(std::move(omega), std::move(power), segments);
}

}  // namespace shuttle
