#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "shuttle/classical.hpp"
#include "shuttle/grid.hpp"
#include "shuttle/path.hpp"
#include "shuttle/potential.hpp"

namespace shuttle {

class QuantumState {
 public:
  QuantumState(Grid grid, std::vector<std::complex<double>> amplitudes);

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<std::complex<double>>& amplitudes() const noexcept { return psi_; }
  std::vector<std::complex<double>>& amplitudes() noexcept { return psi_; }

  /// sum |psi|^2 dx
  double norm() const;
  QuantumState normalized() const;
  double density(std::size_t i) const { return std::norm(psi_[i]); }

 private:
  Grid grid_;
  std::vector<std::complex<double>> psi_;
};

/// Potential seen by the wavefunction on the grid for a trap at `trap_position`.
/// Lattices are reduced to their central well: outside it the potential is held at
/// the barrier height, so only one site is modelled.
std::vector<double> grid_potential(const PotentialModel& potential, const Grid& grid,
                                   double trap_position);

struct GroundStateOptions {
  double tolerance = 1e-8;  // residual ||H psi - E psi|| in grid norm
  int max_iterations = 20000;
};

struct GroundState {
  QuantumState state;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Lowest eigenstate of p^2/2m + U(x - trap_position). Starts from the harmonic
/// Gaussian of the well and refines it with a kinetic-preconditioned locally optimal
/// block iteration until the residual meets the tolerance.
GroundState ground_state(const PotentialModel& potential, const Grid& grid, double trap_position,
                         double hbar, const GroundStateOptions& options = {});

/// |<target|psi>|^2 on a shared grid.
double fidelity(const QuantumState& psi, const QuantumState& target);

/// <psi|p^2/2m + U(x - trap_position)|psi>, kinetic part evaluated in momentum space.
double energy_expectation(const QuantumState& psi, const PotentialModel& potential,
                          double trap_position, double hbar);

/// <H_final> - E_ground(final trap).
double excess_energy_quantum(const QuantumState& psi, const PotentialModel& potential,
                             double trap_position, double hbar);

/// min(2 pi / (200 omega), t_f / 2000).
double default_quantum_dt(double omega, double duration);

struct QuantumOptions {
  DrivingMode mode = DrivingMode::Plain;
  double dt = 0.0;  // 0: default_quantum_dt
  PotentialModulation modulation;
  std::vector<double> snapshot_times;
  double edge_threshold = 1e-8;    // density allowed in the outer grid cells
  double escape_threshold = 1e-3;  // probability allowed outside the central well
  std::size_t monitor_samples = 100;  // trap-frame energy evaluations along the run
};

struct Snapshot {
  double time = 0.0;
  QuantumState state;
};

struct QuantumRun {
  QuantumState state;
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
  double dt = 0.0;
  double norm_drift = 0.0;  // |norm - 1| at the end
  double max_relative_displacement = 0.0;  // max |<x> - x_0 - well center|, every step
  double max_transient_energy = 0.0;       // max trap-frame <H> - U_min at the monitor samples
};

/// Strang split-step propagation: half kinetic step, full potential step at the
/// midpoint time, half kinetic step. The counterdiabatic term p x_0' is diagonal in
/// momentum space and enters the kinetic half-steps as exact translations.
/// Throws BoundaryContaminationError when density reaches the grid edge and
/// EscapeError when too much probability leaves the central well.
QuantumRun propagate_quantum(const TrapPath& trap, const PotentialModel& potential,
                             const QuantumState& psi0, double hbar, const QuantumOptions& options = {});

}  // namespace shuttle
