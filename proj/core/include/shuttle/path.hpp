#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace shuttle {

enum class PathRole { Reference, Trap };

const char* to_string(PathRole role) noexcept;

struct Kinematics {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
};

/// Highest polynomial degree accepted anywhere in the toolkit.
inline constexpr int kMaxPolynomialDegree = 31;

/// x(t) = sum_k c_k s^k with scaled time s = t / duration in [0, 1].
///
/// Derivatives come from the coefficients directly; nothing here finite-differences.
class PolyPath {
 public:
  PolyPath(std::vector<double> coefficients, double duration, PathRole role);

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  double duration() const noexcept { return duration_; }
  PathRole role() const noexcept { return role_; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

  double position(double t) const;
  double velocity(double t) const;
  double acceleration(double t) const;
  Kinematics at(double t) const;

  /// n-th derivative with respect to t (not s), evaluated at t.
  double derivative(int order, double t) const;

  double start_value() const { return coefficients_.front(); }
  double end_value() const;

  /// Coefficients (in s) of d^order x / dt^order.
  std::vector<double> time_derivative_coefficients(int order) const;

  PolyPath scaled(double factor) const;
  PolyPath with_role(PathRole role) const;

 private:
  std::vector<double> coefficients_;
  double duration_;
  PathRole role_;
};

/// A discontinuity of a trap path at `time`; either jump may be zero.
struct Jump {
  double time = 0.0;
  double position_jump = 0.0;
  double velocity_jump = 0.0;
};

/// Uniformly sampled path over [0, duration] with optional jump annotations.
///
/// A sample sitting exactly on an annotated jump stores the right limit.
class SampledPath {
 public:
  SampledPath(double duration, std::vector<double> positions, std::vector<double> velocities,
              std::vector<double> accelerations, std::vector<Jump> jumps = {});

  static SampledPath from(const PolyPath& path, std::size_t samples);

  std::size_t size() const noexcept { return positions_.size(); }
  double duration() const noexcept { return duration_; }
  double step() const noexcept { return duration_ / static_cast<double>(size() - 1); }
  double time(std::size_t i) const noexcept { return step() * static_cast<double>(i); }
  std::vector<double> times() const;

  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> velocities() const noexcept { return velocities_; }
  std::span<const double> accelerations() const noexcept { return accelerations_; }
  const std::vector<Jump>& jumps() const noexcept { return jumps_; }
  bool has_interior_jumps() const noexcept;

  /// Cubic Hermite interpolation of position/velocity, linear for acceleration.
  Kinematics at(double t) const;

 private:
  double duration_;
  std::vector<double> positions_;
  std::vector<double> velocities_;
  std::vector<double> accelerations_;
  std::vector<Jump> jumps_;
};

/// Piecewise polynomial in absolute local time, x(t) = sum_k c_jk (t - t_j)^k on
/// [t_j, t_{j+1}). The trap rests at `rest_before` for t < 0 and at `rest_after`
/// for t > duration; any mismatch with the end pieces is a jump.
class PiecewisePath {
 public:
  PiecewisePath(std::vector<double> knots, std::vector<std::vector<double>> pieces,
                double rest_before, double rest_after);

  const std::vector<double>& knots() const noexcept { return knots_; }
  std::size_t segments() const noexcept { return pieces_.size(); }
  const std::vector<double>& piece(std::size_t segment) const { return pieces_.at(segment); }
  double duration() const noexcept { return knots_.back(); }
  double rest_before() const noexcept { return rest_before_; }
  double rest_after() const noexcept { return rest_after_; }

  Kinematics at(std::size_t segment, double t) const;
  /// Selects the segment containing t (right-continuous).
  Kinematics at(double t) const;

  /// Every discontinuity, including the boundary transitions to rest.
  std::vector<Jump> jumps() const;

 private:
  std::vector<double> knots_;
  std::vector<std::vector<double>> pieces_;
  double rest_before_;
  double rest_after_;
};

using TrapPath = std::variant<PolyPath, SampledPath, PiecewisePath>;

double duration_of(const TrapPath& path);

/// Segment boundaries [0, ..., duration]; integrators never step across them.
std::vector<double> breakpoints_of(const TrapPath& path);

/// Kinematics inside a given segment; t may sit on either end of the segment.
Kinematics evaluate(const TrapPath& path, std::size_t segment, double t);

/// Trap position before the protocol starts and after it ends.
double initial_position(const TrapPath& path);
double final_position(const TrapPath& path);

SampledPath sample(const TrapPath& path, std::size_t samples);

/// Smallest step count >= steps whose uniform grid hits every breakpoint.
std::size_t align_steps_to_breakpoints(const TrapPath& path, std::size_t steps);

/// Walks uniform steps and reports which segment each step lies in.
class SegmentCursor {
 public:
  explicit SegmentCursor(const TrapPath& path) : knots_(breakpoints_of(path)) {}

  /// Segment of the step that starts at t.
  std::size_t advance(double t);

 private:
  std::vector<double> knots_;
  std::size_t segment_ = 0;
};

}  // namespace shuttle
