#include "shuttle/oscillatory.hpp"

#include <cmath>

#include "shuttle/error.hpp"

namespace shuttle {
namespace {

using cld = std::complex<long double>;

constexpr long double kSeriesThreshold = 12.0L;

cld series_moment(int j, long double theta) {
  // sum_n (i theta)^n / (n! (j + n + 1))
  cld term_power{1.0L, 0.0L};  // (i theta)^n / n!
  cld sum{0.0L, 0.0L};
  const cld itheta{0.0L, theta};
  for (int n = 0; n < 400; ++n) {
    const cld term = term_power / static_cast<long double>(j + n + 1);
    sum += term;
    if (n > theta && std::abs(term) <= 1e-22L * std::abs(sum)) break;
    term_power *= itheta / static_cast<long double>(n + 1);
  }
  return sum;
}

}  // namespace

std::vector<cld> oscillatory_moments(long double theta, int max_power) {
  require(max_power >= 0, "max_power must be non-negative");
  const bool negative = theta < 0;
  const long double a = std::fabs(theta);
  std::vector<cld> m(static_cast<std::size_t>(max_power) + 1);

  if (a < kSeriesThreshold) {
    for (int j = 0; j <= max_power; ++j) m[static_cast<std::size_t>(j)] = series_moment(j, a);
  } else {
    const cld itheta{0.0L, a};
    const cld e{std::cos(a), std::sin(a)};
    m[0] = (e - 1.0L) / itheta;
    for (int j = 1; j <= max_power; ++j) {
      m[static_cast<std::size_t>(j)] =
          (e - static_cast<long double>(j) * m[static_cast<std::size_t>(j) - 1]) / itheta;
    }
  }
  if (negative) {
    for (auto& v : m) v = std::conj(v);
  }
  return m;
}

cld oscillatory_integral(std::span<const double> coefficients, long double theta) {
  if (coefficients.empty()) return {0.0L, 0.0L};
  const auto m = oscillatory_moments(theta, static_cast<int>(coefficients.size()) - 1);
  cld sum{0.0L, 0.0L};
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    sum += static_cast<long double>(coefficients[k]) * m[k];
  }
  return sum;
}

}  // namespace shuttle
