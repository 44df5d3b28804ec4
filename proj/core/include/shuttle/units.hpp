#pragma once

#include <string>

namespace shuttle {

/// Scales that tie the internal dimensionless quantities to SI.
///
/// Internally every quantity is a plain number in units of (length, time, mass).
/// With the natural system all three scales are 1 and hbar = 1. With an SI-backed
/// system hbar becomes hbar_SI * time / (mass * length^2).
class UnitSystem {
 public:
  static UnitSystem natural();
  static UnitSystem from_si_scales(double length_m, double time_s, double mass_kg);

  bool is_natural() const noexcept { return natural_; }
  double hbar() const noexcept { return hbar_; }

  double length_m() const noexcept { return length_m_; }
  double time_s() const noexcept { return time_s_; }
  double mass_kg() const noexcept { return mass_kg_; }

  double to_si_length(double x) const noexcept { return x * length_m_; }
  double to_si_time(double t) const noexcept { return t * time_s_; }
  double to_si_velocity(double v) const noexcept { return v * length_m_ / time_s_; }
  double to_si_acceleration(double a) const noexcept { return a * length_m_ / (time_s_ * time_s_); }
  double to_si_energy(double e) const noexcept {
    return e * mass_kg_ * length_m_ * length_m_ / (time_s_ * time_s_);
  }

  double from_si_length(double x) const noexcept { return x / length_m_; }
  double from_si_time(double t) const noexcept { return t / time_s_; }
  double from_si_mass(double m) const noexcept { return m / mass_kg_; }
  double from_si_angular_frequency(double w) const noexcept { return w * time_s_; }

  std::string name() const { return natural_ ? "natural" : "si-scaled"; }

 private:
  UnitSystem(bool natural, double length_m, double time_s, double mass_kg, double hbar)
      : natural_(natural), length_m_(length_m), time_s_(time_s), mass_kg_(mass_kg), hbar_(hbar) {}

  bool natural_;
  double length_m_;
  double time_s_;
  double mass_kg_;
  double hbar_;
};

inline constexpr double kHbarSI = 1.054571817e-34;

}  // namespace shuttle
