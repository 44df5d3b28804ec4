#pragma once

#include <string>
#include <variant>

namespace shuttle {

struct Harmonic {
  double omega = 1.0;
};

/// A sin^2(K y + phi).
struct Lattice {
  double depth = 1.0;
  double wavenumber = 1.0;
  double phase = 0.0;
};

/// -U0 exp(-2 y^2 / w^2).
struct Gaussian {
  double depth = 1.0;
  double waist = 1.0;
};

using PotentialShape = std::variant<Harmonic, Lattice, Gaussian>;

/// Multiplicative/additive parameter fluctuations applied to a lattice:
/// A -> A * amplitude_scale, K -> K * wavenumber_scale, phi -> phi + phase_shift.
struct LatticePerturbation {
  double amplitude_scale = 1.0;
  double wavenumber_scale = 1.0;
  double phase_shift = 0.0;
};

/// A trap shape together with the particle mass, evaluated at the displaced
/// coordinate y = q - x_0(t).
class PotentialModel {
 public:
  PotentialModel(double mass, PotentialShape shape);

  static PotentialModel harmonic(double mass, double omega);
  static PotentialModel lattice(double mass, double depth, double wavenumber, double phase = 0.0);
  static PotentialModel gaussian(double mass, double depth, double waist);

  double mass() const noexcept { return mass_; }
  const PotentialShape& shape() const noexcept { return shape_; }
  bool is_harmonic() const noexcept { return std::holds_alternative<Harmonic>(shape_); }
  bool is_lattice() const noexcept { return std::holds_alternative<Lattice>(shape_); }
  bool is_gaussian() const noexcept { return std::holds_alternative<Gaussian>(shape_); }
  std::string name() const;

  double value(double y) const;
  /// dU/dy
  double slope(double y) const;

  /// Small-oscillation frequency at the bottom of the central well.
  double frequency() const;

  /// Displacement of the central well minimum from the trap position (lattice phase
  /// shifts the well; the other shapes sit at y = 0).
  double well_center() const;
  double minimum_value() const;

  /// Half-width of the central well measured from well_center(); infinite for Harmonic.
  double support_half_width() const;
  bool inside_support(double y) const;

  /// Lattice with fluctuating parameters; other shapes reject a non-trivial perturbation.
  PotentialModel perturbed(const LatticePerturbation& p) const;

 private:
  double mass_;
  PotentialShape shape_;
};

}  // namespace shuttle
