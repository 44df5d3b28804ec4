#pragma once

#include <cstddef>
#include <vector>

#include "shuttle/path.hpp"
#include "shuttle/potential.hpp"

namespace shuttle {

/// Periodic uniform grid x_i = x_min + i dx, i < n, dx = (x_max - x_min) / n, n a power of two.
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t n);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_); }
  double length() const noexcept { return x_max_ - x_min_; }
  double x(std::size_t i) const noexcept { return x_min_ + dx() * static_cast<double>(i); }
  /// Angular wavenumber of FFT bin i (standard FFT ordering).
  double wavenumber(std::size_t i) const noexcept;
  double max_wavenumber() const noexcept;
  std::vector<double> positions() const;

  bool operator==(const Grid& other) const noexcept {
    return x_min_ == other.x_min_ && x_max_ == other.x_max_ && n_ == other.n_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
};

/// sqrt(hbar / (m omega)) for the small-oscillation frequency of the trap.
double ground_state_width(const PotentialModel& potential, double hbar);

struct GridOptions {
  std::size_t points = 0;     // 0: automatic, at least 1024
  double margin_widths = 8.0;  // padding beyond the trap excursion, in ground-state widths
  std::size_t max_points = std::size_t{1} << 18;
};

/// Grid covering every trap position of the protocol plus the central well and
/// `margin_widths` ground-state widths on both sides, fine enough to resolve the
/// momenta the trap motion can impart.
Grid transport_grid(const TrapPath& trap, const PotentialModel& potential, double hbar,
                    const GridOptions& options = {});

}  // namespace shuttle
