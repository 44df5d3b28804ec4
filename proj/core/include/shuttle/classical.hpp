#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "shuttle/path.hpp"
#include "shuttle/potential.hpp"

namespace shuttle {

/// Plain: H = p^2/2m + U(q - x_0).
/// Compensating: adds -m q x_0'' so the trap frame feels no inertial force.
/// Counterdiabatic: adds p x_0', which drags eigenstates along exactly.
enum class DrivingMode { Plain, Compensating, Counterdiabatic };

const char* to_string(DrivingMode mode) noexcept;
DrivingMode driving_mode_from_string(const std::string& name);

struct ClassicalState {
  double q = 0.0;
  double p = 0.0;
};

struct ExcitationReport {
  double final_excess_energy = 0.0;
  std::optional<double> fidelity;  // quantum runs only
  double max_transient_energy = 0.0;
  double max_relative_displacement = 0.0;
  DrivingMode mode = DrivingMode::Plain;
};

/// Lattice parameter fluctuation held constant over integrator step `step`.
using PotentialModulation = std::function<LatticePerturbation(std::size_t step)>;

struct ClassicalOptions {
  DrivingMode mode = DrivingMode::Plain;
  PotentialModulation modulation;  // empty: noiseless
  std::size_t record_every = 0;    // 0: keep only the end points
};

struct ClassicalTrajectory {
  std::vector<double> t;
  std::vector<double> q;
  std::vector<double> p;
};

struct ClassicalRun {
  ClassicalTrajectory trajectory;
  ClassicalState final_state;
  ExcitationReport report;
  std::size_t steps = 0;  // after alignment to path breakpoints
};

/// Energy of a state above the potential minimum, with the trap resting at `trap_position`.
double excess_energy(const PotentialModel& potential, ClassicalState state, double trap_position);

/// State at rest at the bottom of the central well of a trap located at `trap_position`.
ClassicalState rest_state(const PotentialModel& potential, double trap_position);

/// Fixed-step RK4 of the driven particle. Steps are raised as needed so the grid hits
/// every path breakpoint; fewer than 100 steps are rejected. Throws EscapeError when
/// the particle leaves the central well of a lattice or gaussian trap.
ClassicalRun integrate_classical(const TrapPath& trap, const PotentialModel& potential,
                                 ClassicalState initial, std::size_t steps,
                                 const ClassicalOptions& options = {});

}  // namespace shuttle
