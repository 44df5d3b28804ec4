#include "shuttle/fourier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "shuttle/error.hpp"
#include "shuttle/oscillatory.hpp"
#include "shuttle/parallel.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {
namespace {

using cd = std::complex<double>;
using cld = std::complex<long double>;

constexpr std::size_t kMinSimpsonPoints = 4097;

cd to_double(cld z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

cd jump_term(const Jump& j, double omega) {
  const cd phase = std::polar(1.0, omega * j.time);
  return (j.velocity_jump - cd(0.0, omega) * j.position_jump) * phase;
}

// int_0^T q(tau) e^{i omega tau} d tau with q in absolute local time.
cld piece_transform(const std::vector<double>& local, double length, double omega) {
  std::vector<double> scaled(local.size());
  double power = 1.0;
  for (std::size_t k = 0; k < local.size(); ++k, power *= length) scaled[k] = local[k] * power;
  return static_cast<long double>(length) *
         oscillatory_integral(scaled, static_cast<long double>(omega) * length);
}

std::vector<double> second_derivative(const std::vector<double>& c) {
  if (c.size() < 3) return {0.0};
  std::vector<double> d(c.size() - 2);
  for (std::size_t k = 2; k < c.size(); ++k) {
    d[k - 2] = static_cast<double>(k) * static_cast<double>(k - 1) * c[k];
  }
  return d;
}

// 4-point Lagrange interpolation of uniformly spaced samples.
double cubic_sample(std::span<const double> y, double u) {
  const std::size_t n = y.size();
  if (n < 4) {
    const auto i = std::min(static_cast<std::size_t>(std::floor(u)), n - 2);
    const double s = u - static_cast<double>(i);
    return (1 - s) * y[i] + s * y[i + 1];
  }
  auto i = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 4);
  const double s = u - static_cast<double>(i);
  const double* p = y.data() + i;
  return p[0] * (s - 1) * (s - 2) * (s - 3) / -6.0 + p[1] * s * (s - 2) * (s - 3) / 2.0 +
         p[2] * s * (s - 1) * (s - 3) / -2.0 + p[3] * s * (s - 1) * (s - 2) / 6.0;
}

void check_sampled_consistency(const SampledPath& path) {
  const auto x = path.positions();
  const auto v = path.velocities();
  const auto a = path.accelerations();
  const double h = path.step();
  const double tf = path.duration();
  const double vmax = *std::max_element(v.begin(), v.end(), [](double p, double q) {
    return std::abs(p) < std::abs(q);
  });
  const double amax = *std::max_element(a.begin(), a.end(), [](double p, double q) {
    return std::abs(p) < std::abs(q);
  });
  double xscale = 0.0;
  for (double xi : x) xscale = std::max(xscale, std::abs(xi));
  const double vscale = std::max(std::abs(vmax), xscale / tf);
  const double tol_v = 1e-9 * std::max(vscale, 1e-300);

  const auto flagged_dv = [&](double lo, double hi, bool include_lo) {
    double sum = 0.0;
    for (const Jump& j : path.jumps()) {
      if ((j.time > lo || (include_lo && j.time == lo)) && j.time <= hi) sum += j.velocity_jump;
    }
    return sum;
  };
  const auto flagged_dx = [&](double lo, double hi, bool include_lo) {
    double sum = 0.0;
    for (const Jump& j : path.jumps()) {
      if ((j.time > lo || (include_lo && j.time == lo)) && j.time <= hi) sum += j.position_jump;
    }
    return sum;
  };

  const double start_dv = flagged_dv(0.0, 0.0, true);
  if (std::abs(v.front() - start_dv) > tol_v) {
    throw InvalidArgument("velocity discontinuity at t = 0 does not match the jump annotations");
  }
  double end_dv = 0.0;
  for (const Jump& j : path.jumps()) {
    if (j.time == tf) end_dv += j.velocity_jump;
  }
  if (std::abs(-v.back() - end_dv) > tol_v) {
    throw InvalidArgument("velocity discontinuity at t = t_f does not match the jump annotations");
  }

  // A smooth step cannot move further than the mean value theorem allows.
  const double step_x = 2.0 * h * std::abs(vmax) + h * h * std::abs(amax) + 1e-12 * xscale;
  const double step_v = 2.0 * h * std::abs(amax) + tol_v;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double lo = path.time(i), hi = (i + 2 == x.size()) ? tf - 0.5 * h : path.time(i + 1);
    const double dx = flagged_dx(lo, hi, false);
    const double dv = flagged_dv(lo, hi, false);
    if (std::abs(x[i + 1] - x[i] - dx) > step_x) {
      throw InvalidArgument("sampled path has a position discontinuity near t = " +
                            std::to_string(lo) + " that the jump annotations do not match");
    }
    if (std::abs(v[i + 1] - v[i] - dv) > step_v) {
      throw InvalidArgument("sampled path has a velocity discontinuity near t = " +
                            std::to_string(lo) + " that the jump annotations do not match");
    }
  }
}

}  // namespace

ExcitationSpectrum::ExcitationSpectrum(std::vector<double> frequencies, std::vector<double> excitation)
    : frequencies_(std::move(frequencies)), excitation_(std::move(excitation)) {
  require(frequencies_.size() == excitation_.size(), "spectrum arrays must share one length");
  for (std::size_t i = 1; i < frequencies_.size(); ++i) {
    require(frequencies_[i] > frequencies_[i - 1], "spectrum frequencies must increase strictly");
  }
  for (double e : excitation_) require(e >= 0.0, "excitation must be non-negative");
}

bool starts_and_ends_at_rest(const PolyPath& trap) {
  double scale = 0.0;
  for (double c : trap.coefficients()) scale = std::max(scale, std::abs(c));
  const double tol = 1e-9 * std::max(scale / trap.duration(), 1e-300);
  return std::abs(trap.velocity(0.0)) <= tol && std::abs(trap.velocity(trap.duration())) <= tol;
}

std::complex<double> acceleration_transform(const PolyPath& trap, double omega, bool discontinuous) {
  require(std::isfinite(omega) && omega >= 0, "transform frequency must be non-negative");
  const double tf = trap.duration();
  const auto acc = second_derivative(trap.coefficients());
  cld total = oscillatory_integral(acc, static_cast<long double>(omega) * tf) /
              static_cast<long double>(tf);

  const double v0 = trap.velocity(0.0);
  const double v1 = trap.velocity(tf);
  const bool has_jumps = !starts_and_ends_at_rest(trap);
  if (has_jumps && !discontinuous) {
    throw InvalidArgument("trap path does not start and end at rest; flag it as discontinuous");
  }
  if (!has_jumps && discontinuous) {
    throw InvalidArgument("path flagged as discontinuous but both boundary velocities vanish");
  }
  cd result = to_double(total);
  if (discontinuous) {
    result += jump_term({0.0, 0.0, v0}, omega);
    result += jump_term({tf, 0.0, -v1}, omega);
  }
  return result;
}

std::complex<double> acceleration_transform(const SampledPath& trap, double omega) {
  require(std::isfinite(omega) && omega >= 0, "transform frequency must be non-negative");
  check_sampled_consistency(trap);

  const double tf = trap.duration();
  std::size_t n = std::max(trap.size(), kMinSimpsonPoints);
  if (n % 2 == 0) ++n;
  std::vector<double> acc(n);
  const auto a = trap.accelerations();
  if (n == trap.size()) {
    std::copy(a.begin(), a.end(), acc.begin());
  } else {
    const double ratio = static_cast<double>(trap.size() - 1) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) acc[i] = cubic_sample(a, ratio * static_cast<double>(i));
  }

  const double h = tf / static_cast<double>(n - 1);
  cld sum{0.0L, 0.0L};
  for (std::size_t i = 0; i < n; ++i) {
    const long double w = (i == 0 || i == n - 1) ? 1.0L : (i % 2 == 1 ? 4.0L : 2.0L);
    const long double ph = static_cast<long double>(omega) * h * static_cast<long double>(i);
    sum += w * static_cast<long double>(acc[i]) * cld(std::cos(ph), std::sin(ph));
  }
  cd result = to_double(sum * static_cast<long double>(h) / 3.0L);
  for (const Jump& j : trap.jumps()) result += jump_term(j, omega);
  return result;
}

std::complex<double> acceleration_transform(const PiecewisePath& trap, double omega) {
  require(std::isfinite(omega) && omega >= 0, "transform frequency must be non-negative");
  cld total{0.0L, 0.0L};
  const auto& knots = trap.knots();
  for (std::size_t j = 0; j < trap.segments(); ++j) {
    const double length = knots[j + 1] - knots[j];
    const long double ph = static_cast<long double>(omega) * knots[j];
    total += cld(std::cos(ph), std::sin(ph)) *
             piece_transform(second_derivative(trap.piece(j)), length, omega);
  }
  cd result = to_double(total);
  for (const Jump& j : trap.jumps()) result += jump_term(j, omega);
  return result;
}

std::complex<double> acceleration_transform(const TrapPath& trap, double omega, bool discontinuous) {
  if (const auto* p = std::get_if<PolyPath>(&trap)) {
    return acceleration_transform(*p, omega, discontinuous);
  }
  if (const auto* s = std::get_if<SampledPath>(&trap)) return acceleration_transform(*s, omega);
  return acceleration_transform(std::get<PiecewisePath>(trap), omega);
}

double excitation_from_transform(double mass, std::complex<double> transform) {
  require(mass > 0, "mass must be positive");
  return 0.5 * mass * std::norm(transform);
}

std::complex<double> acceleration_transform_derivative(const PolyPath& trap, double omega) {
  // d/domega int x'' e^{i omega t} dt = i int_0^1 s p''(s) e^{i theta s} ds
  auto acc = second_derivative(trap.coefficients());
  acc.insert(acc.begin(), 0.0);
  const cld value = oscillatory_integral(acc, static_cast<long double>(omega) * trap.duration());
  return to_double(cld(0.0L, 1.0L) * value);
}

// ---------------------------------------------------------------------------
// Multi-null design

namespace {

using Poly = std::vector<long double>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Shifted Legendre polynomial P_n(2s - 1) in monomials of s.
Poly shifted_legendre(int n) {
  Poly c(static_cast<std::size_t>(n) + 1, 0.0L);
  long double binom_nk = 1.0L, binom_nkk = 1.0L;  // C(n,k), C(n+k,k)
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      binom_nk = binom_nk * static_cast<long double>(n - k + 1) / k;
      binom_nkk = binom_nkk * static_cast<long double>(n + k) / k;
    }
    const long double sign = ((n + k) % 2 == 0) ? 1.0L : -1.0L;
    c[static_cast<std::size_t>(k)] = sign * binom_nk * binom_nkk;
  }
  return c;
}

// s^(k+1) (1 - s)^(k+1)
Poly boundary_bump(int k) {
  Poly c{1.0L};
  for (int i = 0; i <= k; ++i) c = multiply(c, Poly{0.0L, 1.0L});
  for (int i = 0; i <= k; ++i) c = multiply(c, Poly{1.0L, -1.0L});
  return c;
}

// Real and imaginary parts of the constraint functionals applied to polynomial p(s).
void constraint_values(const Poly& p, double tf, const NullTarget& target, std::vector<long double>& out) {
  Poly acc(p.size() > 2 ? p.size() - 2 : 1, 0.0L);
  for (std::size_t k = 2; k < p.size(); ++k) {
    acc[k - 2] = static_cast<long double>(k) * static_cast<long double>(k - 1) * p[k];
  }
  const long double theta = static_cast<long double>(target.omega) * tf;
  const auto m = oscillatory_moments(theta, static_cast<int>(acc.size()));
  cld value{0.0L, 0.0L}, slope{0.0L, 0.0L};
  for (std::size_t k = 0; k < acc.size(); ++k) {
    value += acc[k] * m[k];
    slope += acc[k] * m[k + 1];
  }
  out.push_back(value.real());
  out.push_back(value.imag());
  if (target.flat) {
    out.push_back(slope.real());
    out.push_back(slope.imag());
  }
}

}  // namespace

PolyPath design_multinull(const TransportTask& task, std::span<const NullTarget> targets,
                          int continuity_order) {
  if (targets.size() > kMaxNullTargets) {
    throw InvalidArgument("at most " + std::to_string(kMaxNullTargets) + " null frequencies");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    require(std::isfinite(targets[i].omega) && targets[i].omega > 0,
            "null frequencies must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      require(std::abs(targets[i].omega - targets[j].omega) > 1e-9 * targets[i].omega,
              "null frequencies must be distinct");
    }
  }

  const PolyPath base = solve_boundary_polynomial(task, continuity_order).with_role(PathRole::Trap);
  std::size_t rows = 0;
  for (const auto& t : targets) rows += t.flat ? 4 : 2;
  if (rows == 0) return base;

  const int degree = 2 * continuity_order + 1 + static_cast<int>(rows);
  if (degree > kMaxPolynomialDegree) {
    throw InvalidArgument("design needs degree " + std::to_string(degree) + " (max " +
                          std::to_string(kMaxPolynomialDegree) + ")");
  }

  const double tf = task.duration();
  const Poly bump = boundary_bump(continuity_order);
  std::vector<Poly> basis;
  for (std::size_t j = 0; j < rows; ++j) {
    basis.push_back(multiply(bump, shifted_legendre(static_cast<int>(j))));
  }

  Eigen::MatrixXd system(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows));
  {
    Poly base_ld(base.coefficients().begin(), base.coefficients().end());
    std::vector<long double> values;
    for (const auto& t : targets) constraint_values(base_ld, tf, t, values);
    for (std::size_t r = 0; r < rows; ++r) rhs(static_cast<Eigen::Index>(r)) = -static_cast<double>(values[r]);
  }
  for (std::size_t j = 0; j < rows; ++j) {
    std::vector<long double> values;
    for (const auto& t : targets) constraint_values(basis[j], tf, t, values);
    for (std::size_t r = 0; r < rows; ++r) {
      system(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = static_cast<double>(values[r]);
    }
  }

  // Equilibrate rows and columns before judging conditioning.
  Eigen::VectorXd row_scale = system.rowwise().norm();
  for (Eigen::Index r = 0; r < row_scale.size(); ++r) {
    if (row_scale(r) == 0.0) row_scale(r) = 1.0;
  }
  Eigen::MatrixXd scaled = row_scale.cwiseInverse().asDiagonal() * system;
  Eigen::VectorXd col_scale = scaled.colwise().norm();
  for (Eigen::Index c = 0; c < col_scale.size(); ++c) {
    if (col_scale(c) == 0.0) col_scale(c) = 1.0;
  }
  scaled = scaled * col_scale.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond <= kMaxDesignCondition)) {
    std::ostringstream msg;
    msg << "null-frequency system is ill-conditioned (condition number " << cond
        << "); raise continuity_order or spread the null frequencies further apart";
    throw IllConditionedError(msg.str(), cond);
  }
  const Eigen::VectorXd y = svd.solve(row_scale.cwiseInverse().asDiagonal() * rhs);
  const Eigen::VectorXd z = col_scale.cwiseInverse().asDiagonal() * y;

  Poly total(static_cast<std::size_t>(degree) + 1, 0.0L);
  for (std::size_t k = 0; k < base.coefficients().size(); ++k) total[k] += base.coefficients()[k];
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t k = 0; k < basis[j].size(); ++k) {
      total[k] += static_cast<long double>(z(static_cast<Eigen::Index>(j))) * basis[j][k];
    }
  }
  std::vector<double> coefficients(total.size());
  for (std::size_t k = 0; k < total.size(); ++k) coefficients[k] = static_cast<double>(total[k]);
  return PolyPath(std::move(coefficients), tf, PathRole::Trap);
}

PolyPath design_multinull(const TransportTask& task, std::span<const double> null_frequencies,
                          int continuity_order) {
  std::vector<NullTarget> targets;
  targets.reserve(null_frequencies.size());
  for (double w : null_frequencies) targets.push_back({w, false});
  return design_multinull(task, targets, continuity_order);
}

// ---------------------------------------------------------------------------
// Spectra and windows

ExcitationSpectrum excitation_spectrum(const TrapPath& trap, double mass, double omega_min,
                                       double omega_max, std::size_t points, unsigned threads) {
  require(points >= 2, "spectrum needs at least two points");
  require(omega_min >= 0 && omega_max > omega_min, "spectrum range must satisfy 0 <= min < max");
  const auto* poly = std::get_if<PolyPath>(&trap);
  const bool discontinuous = poly != nullptr && !starts_and_ends_at_rest(*poly);
  std::vector<double> w(points), e(points);
  for (std::size_t i = 0; i < points; ++i) {
    w[i] = omega_min + (omega_max - omega_min) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  parallel_for(points, threads, [&](std::size_t i) {
    e[i] = excitation_from_transform(mass, acceleration_transform(trap, w[i], discontinuous));
  });
  return ExcitationSpectrum(std::move(w), std::move(e));
}

RobustnessWindow robustness_window(const TrapPath& trap, double mass, double omega0, double epsilon,
                                   WindowOptions options) {
  require(omega0 > 0 && std::isfinite(omega0), "omega0 must be positive");
  require(epsilon > 0, "epsilon must be positive");
  require(options.points_per_unit >= 400, "scan density must be at least 400 points per unit omega");
  const double half_range = options.half_range > 0 ? options.half_range : 0.5 * omega0;

  const auto* poly = std::get_if<PolyPath>(&trap);
  const bool discontinuous = poly != nullptr && !starts_and_ends_at_rest(*poly);
  const auto excitation = [&](double w) {
    return excitation_from_transform(mass, acceleration_transform(trap, w, discontinuous));
  };

  RobustnessWindow out;
  const double centre = excitation(omega0);
  if (centre > epsilon) {
    std::ostringstream msg;
    msg << "excitation at omega0 (" << centre << ") already exceeds epsilon (" << epsilon << ")";
    out.diagnostic = msg.str();
    return out;
  }

  const auto steps = static_cast<std::size_t>(std::ceil(half_range * options.points_per_unit));
  const double dw = half_range / static_cast<double>(steps);
  const auto side = [&](double direction) {
    double good = omega0;
    for (std::size_t i = 1; i <= steps; ++i) {
      const double w = omega0 + direction * dw * static_cast<double>(i);
      if (w < 0) return std::make_pair(good, false);
      if (excitation(w) > epsilon) {
        double lo = good, hi = w;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (excitation(mid) > epsilon ? hi : lo) = mid;
        }
        return std::make_pair(lo, true);
      }
      good = w;
    }
    return std::make_pair(good, false);
  };
  const auto [left, left_hit] = side(-1.0);
  const auto [right, right_hit] = side(1.0);
  out.half_width = std::min(omega0 - left, right - omega0);
  out.saturated = !left_hit && !right_hit;
  if (out.saturated) out.diagnostic = "threshold not crossed within the scan range";
  return out;
}

TransientSummary transient_summary(const PolyPath& trap, const TransportTask& task) {
  const SampledPath ref = reference_from_trap(trap, task);
  TransientSummary s;
  const double w2 = task.omega() * task.omega();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double lag = ref.positions()[i] - trap.position(ref.time(i));
    s.max_relative_displacement = std::max(s.max_relative_displacement, std::abs(lag));
    const double rel_v = ref.velocities()[i] - trap.velocity(ref.time(i));
    const double energy = 0.5 * task.mass() * (rel_v * rel_v + w2 * lag * lag);
    s.max_transient_energy = std::max(s.max_transient_energy, energy);
  }
  return s;
}

}  // namespace shuttle
