#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shuttle/path.hpp"
#include "shuttle/task.hpp"

namespace shuttle {

/// Final excitation E(omega) = (m/2) |a~(omega)|^2 sampled on a strictly increasing grid.
class ExcitationSpectrum {
 public:
  ExcitationSpectrum(std::vector<double> frequencies, std::vector<double> excitation);

  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<double>& excitation() const noexcept { return excitation_; }
  std::size_t size() const noexcept { return frequencies_.size(); }

 private:
  std::vector<double> frequencies_;
  std::vector<double> excitation_;
};

/// a~(omega) = int_0^tf x_0''(t) e^{i omega t} dt, closed form for polynomials.
///
/// A polynomial trap that does not start and end at rest has velocity jumps at the
/// boundaries; those only count when `discontinuous` is set, and a mismatch between
/// the flag and the path is rejected.
std::complex<double> acceleration_transform(const PolyPath& trap, double omega,
                                            bool discontinuous = false);

/// True when both boundary velocities vanish to round-off, i.e. the transform needs
/// no jump terms.
bool starts_and_ends_at_rest(const PolyPath& trap);

/// Composite Simpson over the acceleration samples (resampled to at least 4097
/// points) plus the delta terms of every annotated jump. Unannotated discontinuities
/// in the samples, or annotations the samples contradict, are rejected.
std::complex<double> acceleration_transform(const SampledPath& trap, double omega);

/// Closed form per piece plus every jump, including the transitions to rest.
std::complex<double> acceleration_transform(const PiecewisePath& trap, double omega);

std::complex<double> acceleration_transform(const TrapPath& trap, double omega,
                                            bool discontinuous = false);

/// E = (m/2) |a~|^2.
double excitation_from_transform(double mass, std::complex<double> transform);

/// d a~ / d omega for a polynomial trap path at rest at both ends (no jump terms).
std::complex<double> acceleration_transform_derivative(const PolyPath& trap, double omega);

/// A frequency at which the designed transform must vanish. With `flat` the
/// derivative with respect to omega vanishes too, which widens the null.
struct NullTarget {
  double omega = 0.0;
  bool flat = false;
};

inline constexpr std::size_t kMaxNullTargets = 8;
inline constexpr double kMaxDesignCondition = 1e12;

/// Trap path meeting the transport boundary conditions (derivatives 1..k zero at both
/// ends) whose acceleration transform vanishes at every target. Each plain target
/// adds two real constraints and raises the degree by two; a flat target adds four.
PolyPath design_multinull(const TransportTask& task, std::span<const NullTarget> targets,
                          int continuity_order = 2);

PolyPath design_multinull(const TransportTask& task, std::span<const double> null_frequencies,
                          int continuity_order = 2);

struct WindowOptions {
  double half_range = 0.0;       // 0 selects omega0 / 2
  double points_per_unit = 400;  // scan density per unit omega
};

struct RobustnessWindow {
  double half_width = 0.0;
  bool saturated = false;  // threshold never crossed inside the scan range
  std::string diagnostic;
};

/// Largest symmetric half-width around omega0 over which E(omega) <= epsilon.
RobustnessWindow robustness_window(const TrapPath& trap, double mass, double omega0,
                                   double epsilon, WindowOptions options = {});

ExcitationSpectrum excitation_spectrum(const TrapPath& trap, double mass, double omega_min,
                                       double omega_max, std::size_t points, unsigned threads = 1);

/// Cost side of a design: how far the particle lags the trap and how much energy it
/// carries in the trap frame while in transit.
struct TransientSummary {
  double max_relative_displacement = 0.0;
  double max_transient_energy = 0.0;
};

TransientSummary transient_summary(const PolyPath& trap, const TransportTask& task);

}  // namespace shuttle
