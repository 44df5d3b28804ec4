#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shuttle/path.hpp"
#include "shuttle/potential.hpp"
#include "shuttle/task.hpp"

namespace shuttle {

/// Bounds on the trap-to-state displacement x_0 - x_c = x_c'' / omega^2 and,
/// optionally, on its first and second time derivatives.
struct ControlConstraint {
  double max_relative_displacement = 0.0;  // delta
  std::optional<double> max_first_derivative;
  std::optional<double> max_second_derivative;
};

struct BangBangResult {
  double min_duration = 0.0;  // (2 / omega) sqrt(d / delta)
  /// Empty when d == 0 (nothing to transport).
  std::optional<PiecewisePath> reference;
  std::optional<PiecewisePath> trap;
  /// Final excess from RK4 integration in units of (1/2) m omega^2 d^2.
  double verified_excess = 0.0;
};

/// Minimal-time rest-to-rest transport with |x_c''| <= omega^2 delta: full
/// acceleration to the midpoint, full deceleration after it. The trap path jumps
/// by +delta, -2 delta and +delta at the start, the switch and the end.
BangBangResult min_time_bang_bang(const TransportTask& task, double delta);

struct SmoothOptions {
  int free_parameters = 6;
  std::size_t verification_points = 10001;
  int restarts = 4;
  int max_iterations = 4000;
  double bisection_tolerance = 1e-3;  // relative, for the smallest feasible t_f
};

struct SmoothResult {
  bool feasible = false;
  PolyPath reference;
  PolyPath trap;
  double max_relative_displacement = 0.0;
  double max_first_derivative = 0.0;
  double max_second_derivative = 0.0;
  double slack = 0.0;  // smallest remaining margin, relative to each bound
  /// Infeasible runs: smallest feasible duration found by bisection.
  std::optional<double> min_feasible_duration{};
  std::string report{};
};

/// Smooth protocol meeting the constraint at duration task.duration(). The reference
/// is the quintic plus s^3 (1-s)^3 times shifted Legendre terms, so the boundary
/// conditions hold for any parameter values; a Nelder-Mead search minimises the
/// largest bound ratio and the result is verified on a dense grid.
SmoothResult constrained_smooth(const TransportTask& task, const ControlConstraint& constraint,
                                const SmoothOptions& options = {});

struct RobustCostWeights {
  double frequency_window = 0.0;     // integral of E over omega (1 +- 5%)
  double peak_displacement = 0.0;    // max |x_0 - x_c|
  double potential_energy = 0.0;     // int (1/2) m omega^2 (x_0 - x_c)^2 dt
  double peak_excursion = 0.0;       // how far x_0 leaves [0, d]
  double anharmonic_energy = 0.0;    // needs a gaussian trap
};

struct CostBreakdown {
  double frequency_window = 0.0;
  double peak_displacement = 0.0;
  double potential_energy = 0.0;
  double peak_excursion = 0.0;
  double anharmonic_energy = 0.0;
  double total = 0.0;
};

struct RobustOptions {
  int free_parameters = 4;  // at most 12
  int restarts = 4;
  int max_iterations = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<PotentialModel> gaussian;  // for the anharmonic term
};

struct RobustResult {
  PolyPath reference;
  PolyPath trap;
  CostBreakdown cost;
  CostBreakdown seed_cost;  // the plain quintic
  std::vector<double> trace{};  // best cost per iteration of the winning restart
  bool converged = true;
  std::string warning{};
  double nominal_excess = 0.0;  // verified by integration, scaled units
};

/// Searches the inverse-engineered family x_0 = x_c + x_c''/omega^2 around the
/// quintic, so every candidate is excitation-free at the nominal frequency. Restart 0
/// starts from the quintic itself; the others start from seeded random offsets.
RobustResult optimize_robust_cost(const TransportTask& task, const RobustCostWeights& weights,
                                  const RobustOptions& options = {});

/// Cost terms of one trap design (reference x_c, trap x_0), each scaled to be dimensionless.
CostBreakdown robust_cost(const TransportTask& task, const PolyPath& reference, const PolyPath& trap,
                          const RobustCostWeights& weights, const std::optional<PotentialModel>& gaussian);

}  // namespace shuttle
