#include "shuttle/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "shuttle/error.hpp"

namespace shuttle {

Grid::Grid(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min, "grid needs x_min < x_max");
  require(n >= 16 && std::has_single_bit(n), "grid size must be a power of two >= 16");
}

double Grid::wavenumber(std::size_t i) const noexcept {
  const double base = 2.0 * std::numbers::pi / length();
  const auto j = static_cast<double>(i);
  return i < n_ / 2 ? base * j : base * (j - static_cast<double>(n_));
}

double Grid::max_wavenumber() const noexcept { return std::numbers::pi / dx(); }

std::vector<double> Grid::positions() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
  return out;
}

double ground_state_width(const PotentialModel& potential, double hbar) {
  require(hbar > 0, "hbar must be positive");
  return std::sqrt(hbar / (potential.mass() * potential.frequency()));
}

Grid transport_grid(const TrapPath& trap, const PotentialModel& potential, double hbar,
                    const GridOptions& options) {
  require(options.margin_widths > 0, "grid margin must be positive");
  const double sigma = ground_state_width(potential, hbar);
  const double tf = duration_of(trap);

  double lo = std::min(initial_position(trap), final_position(trap));
  double hi = std::max(initial_position(trap), final_position(trap));
  double vmax = 0.0;
  const std::size_t samples = 4001;
  const auto knots = breakpoints_of(trap);
  for (std::size_t seg = 0; seg + 1 < knots.size(); ++seg) {
    for (std::size_t i = 0; i < samples; ++i) {
      const double t = knots[seg] + (knots[seg + 1] - knots[seg]) * static_cast<double>(i) /
                                        static_cast<double>(samples - 1);
      const Kinematics k = evaluate(trap, seg, std::min(t, tf));
      lo = std::min(lo, k.position);
      hi = std::max(hi, k.position);
      vmax = std::max(vmax, std::abs(k.velocity));
    }
  }

  const double center = potential.well_center();
  double pad = options.margin_widths * sigma;
  if (std::isfinite(potential.support_half_width())) pad += potential.support_half_width();
  const double x_min = lo + center - pad;
  const double x_max = hi + center + pad;

  // Momentum content: the ground-state spread plus twice the fastest trap velocity.
  const double k_needed = 2.0 * potential.mass() * vmax / hbar + 10.0 / sigma;
  const double dx_target = std::min(std::numbers::pi / (1.5 * k_needed), sigma / 4.0);
  std::size_t n = options.points;
  if (n == 0) {
    n = std::bit_ceil(static_cast<std::size_t>(std::ceil((x_max - x_min) / dx_target)));
    n = std::max<std::size_t>(n, 1024);
  }
  if (n > options.max_points) {
    throw NumericalError("transport grid would need " + std::to_string(n) +
                         " points; shorten the excursion or raise max_points");
  }
  return Grid(x_min, x_max, n);
}

}  // namespace shuttle
