#pragma once

#include <cstddef>

#include "shuttle/path.hpp"
#include "shuttle/task.hpp"

namespace shuttle {

/// Rest-to-rest reference x_c(s) with x_c(0) = 0, x_c(1) = d and derivatives 1..k
/// vanishing at both ends. Degree 2k+1; k = 2 gives the familiar 10s^3 - 15s^4 + 6s^5.
PolyPath solve_boundary_polynomial(const TransportTask& task, int continuity_order = 2);

/// Trap path x_0 = x_c + x_c''/omega^2 that makes x_c an exact solution of the
/// forced oscillator x_c'' + omega^2 x_c = omega^2 x_0.
PolyPath trap_from_reference(const PolyPath& reference, const TransportTask& task);

/// Initial condition of the auxiliary trajectory, in position and momentum.
struct ClassicalOffset {
  double q0 = 0.0;
  double p0 = 0.0;
};

/// Integrates x_c'' = omega^2 (x_0 - x_c) forward with fixed-step RK4.
/// steps == 0 selects default_integration_steps(); fewer than 100 is rejected.
SampledPath reference_from_trap(const TrapPath& trap, const TransportTask& task,
                                ClassicalOffset initial = {}, std::size_t steps = 0);

/// Harmonic-approximation compensation x_0' = x_0 + x_0''/omega^2.
PolyPath shifted_trajectory(const PolyPath& trap, double omega);

/// 2d / t_f^2: no rest-to-rest trap path can keep |x_0''| below this everywhere.
double peak_acceleration_bound(const TransportTask& task);

/// sqrt(m d^2 / (2 hbar omega)); transport much slower than this is adiabatic.
double adiabatic_timescale(const TransportTask& task);

/// max(2000, 200 * omega * t_f / 2pi).
std::size_t default_integration_steps(double omega, double duration);

inline constexpr std::size_t kMinIntegrationSteps = 100;

}  // namespace shuttle
