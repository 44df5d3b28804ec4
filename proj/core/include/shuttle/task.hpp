#pragma once

#include "shuttle/units.hpp"

namespace shuttle {

/// Physical transport problem: move a particle of `mass` held in a trap of angular
/// frequency `omega` over `distance` within `duration`.
class TransportTask {
 public:
  TransportTask(double mass, double omega, double distance, double duration,
                UnitSystem units = UnitSystem::natural());

  double mass() const noexcept { return mass_; }
  double omega() const noexcept { return omega_; }
  double distance() const noexcept { return distance_; }
  double duration() const noexcept { return duration_; }
  const UnitSystem& units() const noexcept { return units_; }
  double hbar() const noexcept { return units_.hbar(); }

  TransportTask with_duration(double duration) const;
  TransportTask with_omega(double omega) const;
  TransportTask with_distance(double distance) const;

  /// (1/2) m omega^2 d^2, the natural energy scale for excitation tolerances.
  double energy_scale() const noexcept;

 private:
  double mass_;
  double omega_;
  double distance_;
  double duration_;
  UnitSystem units_;
};

}  // namespace shuttle
