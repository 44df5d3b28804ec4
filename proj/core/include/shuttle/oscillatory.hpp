#pragma once

#include <complex>
#include <span>
#include <vector>

namespace shuttle {

/// M_j(theta) = int_0^1 s^j e^{i theta s} ds for j = 0..max_power.
///
/// Small |theta| uses the power series, larger |theta| the integration-by-parts
/// recursion M_j = (e^{i theta} - j M_{j-1}) / (i theta); both run in long double.
std::vector<std::complex<long double>> oscillatory_moments(long double theta, int max_power);

/// int_0^1 p(s) e^{i theta s} ds for p(s) = sum_k c_k s^k.
std::complex<long double> oscillatory_integral(std::span<const double> coefficients,
                                               long double theta);

}  // namespace shuttle
