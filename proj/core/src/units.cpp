#include "shuttle/units.hpp"

#include <cmath>

#include "shuttle/error.hpp"

namespace shuttle {

UnitSystem UnitSystem::natural() { return UnitSystem(true, 1.0, 1.0, 1.0, 1.0); }

UnitSystem UnitSystem::from_si_scales(double length_m, double time_s, double mass_kg) {
  require(std::isfinite(length_m) && length_m > 0, "unit length must be positive");
  require(std::isfinite(time_s) && time_s > 0, "unit time must be positive");
  require(std::isfinite(mass_kg) && mass_kg > 0, "unit mass must be positive");
  const double hbar = kHbarSI * time_s / (mass_kg * length_m * length_m);
  return UnitSystem(false, length_m, time_s, mass_kg, hbar);
}

}  // namespace shuttle
