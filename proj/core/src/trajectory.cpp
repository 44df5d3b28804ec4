#include "shuttle/trajectory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shuttle/detail/rk4.hpp"
#include "shuttle/error.hpp"

namespace shuttle {
namespace {

// d^r/ds^r s^k evaluated at s = 0 or s = 1.
double monomial_derivative(int k, int r, double s) {
  if (r > k) return 0.0;
  double falling = 1.0;
  for (int i = 0; i < r; ++i) falling *= static_cast<double>(k - i);
  if (s == 0.0) return k == r ? falling : 0.0;
  return falling;
}

}  // namespace

PolyPath solve_boundary_polynomial(const TransportTask& task, int continuity_order) {
  if (continuity_order < 1 || continuity_order > 3) {
    throw InvalidArgument("continuity_order must be 1, 2 or 3, got " +
                          std::to_string(continuity_order));
  }
  const int n = 2 * continuity_order + 2;
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  int row = 0;
  for (double s : {0.0, 1.0}) {
    for (int r = 0; r <= continuity_order; ++r, ++row) {
      for (int k = 0; k < n; ++k) system(row, k) = monomial_derivative(k, r, s);
    }
  }
  rhs(continuity_order + 1) = 1.0;  // x(1) = 1, scaled by d below

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw NumericalError("boundary-condition system is singular");
  const Eigen::VectorXd unit = lu.solve(rhs);

  std::vector<double> c(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = task.distance() * unit(k);
  return PolyPath(std::move(c), task.duration(), PathRole::Reference);
}

PolyPath trap_from_reference(const PolyPath& reference, const TransportTask& task) {
  require(reference.role() == PathRole::Reference, "trap_from_reference expects a reference path");
  require(std::abs(reference.duration() - task.duration()) <= 1e-12 * task.duration(),
          "reference duration does not match the task");
  const double w2 = task.omega() * task.omega();
  std::vector<double> c = reference.coefficients();
  const auto acc = reference.time_derivative_coefficients(2);
  for (std::size_t k = 0; k < acc.size(); ++k) c[k] += acc[k] / w2;
  return PolyPath(std::move(c), reference.duration(), PathRole::Trap);
}

SampledPath reference_from_trap(const TrapPath& trap, const TransportTask& task,
                                ClassicalOffset initial, std::size_t steps) {
  const double tf = duration_of(trap);
  if (steps == 0) steps = default_integration_steps(task.omega(), tf);
  if (steps < kMinIntegrationSteps) {
    throw InvalidArgument("reference_from_trap needs at least " +
                          std::to_string(kMinIntegrationSteps) + " steps");
  }
  if (const auto* sp = std::get_if<SampledPath>(&trap); sp && sp->has_interior_jumps()) {
    throw InvalidArgument("interior jumps need a PiecewisePath trap representation");
  }

  steps = align_steps_to_breakpoints(trap, steps);
  const double w2 = task.omega() * task.omega();
  SegmentCursor cursor(trap);
  const double h = tf / static_cast<double>(steps);

  std::vector<double> x(steps + 1), v(steps + 1), a(steps + 1);
  detail::Phase y{initial.q0, initial.p0 / task.mass()};
  std::size_t segment = 0;
  const auto trap_at = [&](double t) { return evaluate(trap, segment, t).position; };
  x[0] = y[0];
  v[0] = y[1];
  a[0] = w2 * (trap_at(0.0) - y[0]);

  for (std::size_t i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    segment = cursor.advance(t);
    y = detail::rk4_step(y, t, h, [&](double s, const detail::Phase& z) {
      return detail::Phase{z[1], w2 * (trap_at(s) - z[0])};
    });
    x[i + 1] = y[0];
    v[i + 1] = y[1];
    a[i + 1] = w2 * (trap_at(t + h) - y[0]);
  }
  return SampledPath(tf, std::move(x), std::move(v), std::move(a));
}

PolyPath shifted_trajectory(const PolyPath& trap, double omega) {
  require(omega > 0 && std::isfinite(omega), "omega must be positive");
  std::vector<double> c = trap.coefficients();
  const auto acc = trap.time_derivative_coefficients(2);
  for (std::size_t k = 0; k < acc.size(); ++k) c[k] += acc[k] / (omega * omega);
  return PolyPath(std::move(c), trap.duration(), PathRole::Trap);
}

double peak_acceleration_bound(const TransportTask& task) {
  return 2.0 * task.distance() / (task.duration() * task.duration());
}

double adiabatic_timescale(const TransportTask& task) {
  return std::sqrt(task.mass() * task.distance() * task.distance() /
                   (2.0 * task.hbar() * task.omega()));
}

std::size_t default_integration_steps(double omega, double duration) {
  const double periods = omega * duration / (2.0 * std::numbers::pi);
  return std::max<std::size_t>(2000, static_cast<std::size_t>(std::ceil(200.0 * periods)));
}

}  // namespace shuttle
