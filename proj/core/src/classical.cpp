#include "shuttle/classical.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "shuttle/detail/rk4.hpp"
#include "shuttle/error.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {

const char* to_string(DrivingMode mode) noexcept {
  switch (mode) {
    case DrivingMode::Plain:
      return "plain";
    case DrivingMode::Compensating:
      return "compensating";
    case DrivingMode::Counterdiabatic:
      return "counterdiabatic";
  }
  return "unknown";
}

DrivingMode driving_mode_from_string(const std::string& name) {
  if (name == "plain") return DrivingMode::Plain;
  if (name == "compensating") return DrivingMode::Compensating;
  if (name == "counterdiabatic") return DrivingMode::Counterdiabatic;
  throw InvalidArgument("unknown driving mode '" + name + "'");
}

double excess_energy(const PotentialModel& potential, ClassicalState state, double trap_position) {
  return state.p * state.p / (2.0 * potential.mass()) + potential.value(state.q - trap_position) -
         potential.minimum_value();
}

ClassicalState rest_state(const PotentialModel& potential, double trap_position) {
  return {trap_position + potential.well_center(), 0.0};
}

ClassicalRun integrate_classical(const TrapPath& trap, const PotentialModel& potential,
                                 ClassicalState initial, std::size_t steps,
                                 const ClassicalOptions& options) {
  if (steps < kMinIntegrationSteps) {
    throw InvalidArgument("integrate_classical needs at least " +
                          std::to_string(kMinIntegrationSteps) + " steps");
  }
  require(std::isfinite(initial.q) && std::isfinite(initial.p), "initial state must be finite");
  if (const auto* sp = std::get_if<SampledPath>(&trap); sp && sp->has_interior_jumps()) {
    throw InvalidArgument("interior jumps need a PiecewisePath trap representation");
  }
  const bool inertial = options.mode != DrivingMode::Plain;
  if (inertial && std::holds_alternative<PiecewisePath>(trap)) {
    throw InvalidArgument(std::string(to_string(options.mode)) +
                          " driving needs a smooth trap path");
  }

  const double tf = duration_of(trap);
  steps = align_steps_to_breakpoints(trap, steps);
  const double h = tf / static_cast<double>(steps);
  const double m = potential.mass();
  const double u_min = potential.minimum_value();

  SegmentCursor cursor(trap);
  std::size_t segment = 0;
  PotentialModel current = potential;

  const auto rhs = [&](double t, const detail::Phase& z) {
    const Kinematics k = evaluate(trap, segment, t);
    double force = -current.slope(z[0] - k.position);
    double qdot = z[1] / m;
    if (options.mode == DrivingMode::Compensating) force += m * k.acceleration;
    if (options.mode == DrivingMode::Counterdiabatic) qdot += k.velocity;
    return detail::Phase{qdot, force};
  };

  ClassicalRun run;
  run.steps = steps;
  run.report.mode = options.mode;
  const auto record = [&](double t, const detail::Phase& z) {
    run.trajectory.t.push_back(t);
    run.trajectory.q.push_back(z[0]);
    run.trajectory.p.push_back(z[1]);
  };
  // Trap-frame energy: the particle velocity relative to the moving trap.
  const auto observe = [&](double t, const detail::Phase& z) {
    const Kinematics k = evaluate(trap, segment, t);
    const double y = z[0] - k.position;
    if (!potential.inside_support(y)) {
      std::ostringstream msg;
      msg << "particle escaped the " << potential.name() << " trap at t = " << t
          << " (displacement " << y << ")";
      throw EscapeError(msg.str(), t);
    }
    const double velocity = options.mode == DrivingMode::Counterdiabatic ? z[1] / m : z[1] / m - k.velocity;
    const double energy = 0.5 * m * velocity * velocity + potential.value(y) - u_min;
    run.report.max_transient_energy = std::max(run.report.max_transient_energy, energy);
    run.report.max_relative_displacement =
        std::max(run.report.max_relative_displacement, std::abs(y - potential.well_center()));
  };

  detail::Phase z{initial.q, initial.p};
  observe(0.0, z);
  record(0.0, z);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    segment = cursor.advance(t);
    if (options.modulation) current = potential.perturbed(options.modulation(i));
    z = detail::rk4_step(z, t, h, rhs);
    if (!std::isfinite(z[0]) || !std::isfinite(z[1])) {
      throw NumericalError("classical integration diverged at t = " + std::to_string(t + h));
    }
    observe(t + h, z);
    const bool keep = options.record_every > 0 && (i + 1) % options.record_every == 0;
    if (keep && i + 1 < steps) record(t + h, z);
  }
  record(tf, z);

  run.final_state = {z[0], z[1]};
  run.report.final_excess_energy = excess_energy(potential, run.final_state, final_position(trap));
  return run;
}

}  // namespace shuttle
