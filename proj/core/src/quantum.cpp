#include "shuttle/quantum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/fft.hpp"
#include "shuttle/error.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {
namespace {

using cd = std::complex<double>;

using detail::Fft;

std::vector<double> kinetic_diagonal(const Grid& grid, double mass, double hbar) {
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.wavenumber(i);
    t[i] = hbar * hbar * k * k / (2.0 * mass);
  }
  return t;
}

// Real Hamiltonian applied to a real vector via a complex FFT.
class RealHamiltonian {
 public:
  RealHamiltonian(const Grid& grid, std::vector<double> v, double mass, double hbar)
      : fft_(grid.size()), kinetic_(kinetic_diagonal(grid, mass, hbar)), v_(std::move(v)), work_(grid.size()) {}

  Eigen::VectorXd apply(const Eigen::VectorXd& x) {
    const std::size_t n = work_.size();
    for (std::size_t i = 0; i < n; ++i) work_[i] = x(static_cast<Eigen::Index>(i));
    fft_.forward(work_);
    for (std::size_t i = 0; i < n; ++i) work_[i] *= kinetic_[i] / static_cast<double>(n);
    fft_.backward(work_);
    Eigen::VectorXd out(x.size());
    for (std::size_t i = 0; i < n; ++i) {
      out(static_cast<Eigen::Index>(i)) = work_[i].real() + v_[i] * x(static_cast<Eigen::Index>(i));
    }
    return out;
  }

  // (T + shift)^{-1}
  Eigen::VectorXd precondition(const Eigen::VectorXd& r, double shift) {
    const std::size_t n = work_.size();
    for (std::size_t i = 0; i < n; ++i) work_[i] = r(static_cast<Eigen::Index>(i));
    fft_.forward(work_);
    for (std::size_t i = 0; i < n; ++i) work_[i] /= (kinetic_[i] + shift) * static_cast<double>(n);
    fft_.backward(work_);
    Eigen::VectorXd out(r.size());
    for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = work_[i].real();
    return out;
  }

 private:
  Fft fft_;
  std::vector<double> kinetic_;
  std::vector<double> v_;
  std::vector<cd> work_;
};

void orthogonalize_against(Eigen::VectorXd& v, const std::vector<const Eigen::VectorXd*>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto* b : basis) v -= b->dot(v) * *b;
  }
}

}  // namespace

QuantumState::QuantumState(Grid grid, std::vector<cd> amplitudes)
    : grid_(grid), psi_(std::move(amplitudes)) {
  require(psi_.size() == grid_.size(), "wavefunction length must match the grid");
}

double QuantumState::norm() const {
  double sum = 0.0;
  for (const cd& a : psi_) sum += std::norm(a);
  return sum * grid_.dx();
}

QuantumState QuantumState::normalized() const {
  const double nrm = norm();
  require(nrm > 0, "cannot normalize a zero wavefunction");
  std::vector<cd> out = psi_;
  const double scale = 1.0 / std::sqrt(nrm);
  for (cd& a : out) a *= scale;
  return QuantumState(grid_, std::move(out));
}

std::vector<double> grid_potential(const PotentialModel& potential, const Grid& grid,
                                   double trap_position) {
  std::vector<double> v(grid.size());
  const bool clamp = potential.is_lattice();
  const double barrier = clamp ? std::get<Lattice>(potential.shape()).depth : 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.x(i) - trap_position;
    v[i] = (clamp && !potential.inside_support(y)) ? barrier : potential.value(y);
  }
  return v;
}

GroundState ground_state(const PotentialModel& potential, const Grid& grid, double trap_position,
                         double hbar, const GroundStateOptions& options) {
  require(hbar > 0, "hbar must be positive");
  const std::size_t n = grid.size();
  const auto N = static_cast<Eigen::Index>(n);
  const double dx = grid.dx();
  const double omega = potential.frequency();
  const double scale = hbar * omega;
  const double sigma = ground_state_width(potential, hbar);
  const double center = trap_position + potential.well_center();

  RealHamiltonian h(grid, grid_potential(potential, grid, trap_position), potential.mass(), hbar);

  Eigen::VectorXd x(N);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = (grid.x(i) - center) / sigma;
    x(static_cast<Eigen::Index>(i)) = std::exp(-0.5 * y * y);
  }
  x.normalize();

  // x has unit Euclidean norm, so psi = x / sqrt(dx) and the grid-norm residual of
  // psi equals the Euclidean norm of r.
  const auto grid_residual = [](const Eigen::VectorXd& r) { return r.norm(); };

  Eigen::VectorXd hx = h.apply(x);
  double energy = x.dot(hx);
  Eigen::VectorXd r = hx - energy * x;
  double residual = grid_residual(r);
  Eigen::VectorXd p;
  int it = 0;
  for (; it < options.max_iterations && residual > options.tolerance; ++it) {
    Eigen::VectorXd w = h.precondition(r, scale);
    orthogonalize_against(w, {&x});
    std::vector<const Eigen::VectorXd*> basis{&x};
    Eigen::VectorXd wn = w / w.norm();
    basis.push_back(&wn);
    Eigen::VectorXd hw = h.apply(wn);

    bool use_p = p.size() == N;
    Eigen::VectorXd pn;
    if (use_p) {
      pn = p;
      orthogonalize_against(pn, basis);
      const double pnorm = pn.norm();
      use_p = pnorm > 1e-10 * p.norm();
      if (use_p) pn /= pnorm;
    }
    const int dim = use_p ? 3 : 2;
    Eigen::MatrixXd s(N, dim), hs(N, dim);
    s.col(0) = x;
    s.col(1) = wn;
    hs.col(0) = hx;
    hs.col(1) = hw;
    if (use_p) {
      s.col(2) = pn;
      hs.col(2) = h.apply(pn);
    }
    Eigen::MatrixXd reduced = s.transpose() * hs;
    reduced = 0.5 * (reduced + reduced.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
    const Eigen::VectorXd c = eig.eigenvectors().col(0);

    Eigen::VectorXd direction = s.rightCols(dim - 1) * c.tail(dim - 1);
    Eigen::VectorXd hdirection = hs.rightCols(dim - 1) * c.tail(dim - 1);
    x = c(0) * x + direction;
    hx = c(0) * hx + hdirection;
    const double xn = x.norm();
    x /= xn;
    hx /= xn;
    p = direction;
    energy = x.dot(hx);
    // Recompute H x now and then so round-off in the recurrence cannot stall the residual.
    if (it % 20 == 19) {
      hx = h.apply(x);
      energy = x.dot(hx);
    }
    r = hx - energy * x;
    residual = grid_residual(r);
  }
  hx = h.apply(x);
  energy = x.dot(hx);
  residual = grid_residual(hx - energy * x);
  if (residual > options.tolerance) {
    std::ostringstream msg;
    msg << "ground state did not converge: residual " << residual << " after " << it << " iterations";
    throw NumericalError(msg.str());
  }

  // Fix the sign so the state is positive at the well center.
  Eigen::Index peak = 0;
  x.cwiseAbs().maxCoeff(&peak);
  if (x(peak) < 0) x = -x;
  std::vector<cd> amplitudes(n);
  const double to_grid = 1.0 / std::sqrt(dx);
  for (std::size_t i = 0; i < n; ++i) amplitudes[i] = x(static_cast<Eigen::Index>(i)) * to_grid;
  return GroundState{QuantumState(grid, std::move(amplitudes)), energy, residual, it};
}

double fidelity(const QuantumState& psi, const QuantumState& target) {
  require(psi.grid() == target.grid(), "fidelity needs both states on the same grid");
  cd overlap{0.0, 0.0};
  const auto& a = psi.amplitudes();
  const auto& b = target.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(b[i]) * a[i];
  overlap *= psi.grid().dx();
  return std::min(1.0, std::norm(overlap));
}

double energy_expectation(const QuantumState& psi, const PotentialModel& potential,
                          double trap_position, double hbar) {
  const Grid& grid = psi.grid();
  const std::size_t n = grid.size();
  const auto v = grid_potential(potential, grid, trap_position);
  const auto t = kinetic_diagonal(grid, potential.mass(), hbar);
  std::vector<cd> work = psi.amplitudes();
  Fft fft(n);
  fft.forward(work);
  // Parseval: sum |psi_k|^2 = n sum |psi_x|^2
  double kinetic = 0.0;
  for (std::size_t i = 0; i < n; ++i) kinetic += t[i] * std::norm(work[i]);
  kinetic *= grid.dx() / static_cast<double>(n);
  double pot = 0.0;
  for (std::size_t i = 0; i < n; ++i) pot += v[i] * psi.density(i);
  pot *= grid.dx();
  return (kinetic + pot) / psi.norm();
}

double excess_energy_quantum(const QuantumState& psi, const PotentialModel& potential,
                             double trap_position, double hbar) {
  const GroundState g = ground_state(potential, psi.grid(), trap_position, hbar);
  return energy_expectation(psi, potential, trap_position, hbar) - g.energy;
}

double default_quantum_dt(double omega, double duration) {
  require(omega > 0 && duration > 0, "omega and duration must be positive");
  return std::min(2.0 * std::numbers::pi / (200.0 * omega), duration / 2000.0);
}

QuantumRun propagate_quantum(const TrapPath& trap, const PotentialModel& potential,
                             const QuantumState& psi0, double hbar, const QuantumOptions& options) {
  require(hbar > 0, "hbar must be positive");
  const double initial_norm = psi0.norm();
  require(std::abs(initial_norm - 1.0) <= 1e-10, "initial wavefunction must be normalized");
  if (const auto* sp = std::get_if<SampledPath>(&trap); sp && sp->has_interior_jumps()) {
    throw InvalidArgument("interior jumps need a PiecewisePath trap representation");
  }
  if (options.mode != DrivingMode::Plain && std::holds_alternative<PiecewisePath>(trap)) {
    throw InvalidArgument(std::string(to_string(options.mode)) + " driving needs a smooth trap path");
  }

  const double tf = duration_of(trap);
  const double omega = potential.frequency();
  const double dt_request = options.dt > 0 ? options.dt : default_quantum_dt(omega, tf);
  auto steps = static_cast<std::size_t>(std::ceil(tf / dt_request - 1e-9));
  steps = align_steps_to_breakpoints(trap, std::max<std::size_t>(steps, 1));
  const double dt = tf / static_cast<double>(steps);
  const double dt_max = 2.0 * std::numbers::pi / (40.0 * omega);
  if (dt > dt_max * (1 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds 2 pi / (40 omega) = " << dt_max;
    throw InvalidArgument(msg.str());
  }

  const Grid& grid = psi0.grid();
  const std::size_t n = grid.size();
  const double m = potential.mass();
  const double inv_n = 1.0 / static_cast<double>(n);
  Fft fft(n);

  std::vector<double> k(n);
  std::vector<cd> half_kinetic(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = grid.wavenumber(i);
    half_kinetic[i] = std::polar(inv_n, -hbar * k[i] * k[i] / (2.0 * m) * 0.5 * dt);
  }

  std::vector<double> snapshot_times = options.snapshot_times;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  for (double ts : snapshot_times) require(ts >= 0 && ts <= tf, "snapshot times must lie in [0, t_f]");
  std::size_t next_snapshot = 0;

  QuantumRun run{psi0, {}, steps, dt, 0.0, 0.0, 0.0};
  auto& psi = run.state.amplitudes();
  const auto take_snapshots = [&](double t) {
    while (next_snapshot < snapshot_times.size() && snapshot_times[next_snapshot] <= t + 0.5 * dt) {
      run.snapshots.push_back({t, run.state});
      ++next_snapshot;
    }
  };
  take_snapshots(0.0);

  const bool lattice = potential.is_lattice();
  const bool counterdiabatic = options.mode == DrivingMode::Counterdiabatic;
  const bool compensating = options.mode == DrivingMode::Compensating;
  const double support = potential.support_half_width();
  const bool finite_support = std::isfinite(support);
  const double center = potential.well_center();

  const auto kinetic_half = [&](double shift) {
    fft.forward(psi);
    if (counterdiabatic && shift != 0.0) {
      for (std::size_t i = 0; i < n; ++i) psi[i] *= half_kinetic[i] * std::polar(1.0, -k[i] * shift);
    } else {
      for (std::size_t i = 0; i < n; ++i) psi[i] *= half_kinetic[i];
    }
    fft.backward(psi);
  };

  const std::size_t monitor_stride =
      options.monitor_samples == 0 ? 0 : std::max<std::size_t>(1, steps / options.monitor_samples);
  std::vector<cd> scratch(n);
  // Energy in the frame moving with the trap: the relative velocity is p/m - x_0'
  // for the physical modes and p/m for the counterdiabatic one.
  const auto trap_frame_energy = [&](const Kinematics& at) {
    std::copy(psi.begin(), psi.end(), scratch.begin());
    fft.forward(scratch);
    const double frame_momentum = counterdiabatic ? 0.0 : m * at.velocity;
    double weight = 0.0;
    double kinetic = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::norm(scratch[i]);
      const double rel = hbar * k[i] - frame_momentum;
      weight += w;
      kinetic += w * rel * rel;
    }
    double pot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = grid.x(i) - at.position;
      const double u = (lattice && !potential.inside_support(y)) ? std::get<Lattice>(potential.shape()).depth
                                                                  : potential.value(y);
      pot += std::norm(psi[i]) * u;
    }
    return kinetic / (2.0 * m * weight) + pot * grid.dx() - potential.minimum_value();
  };

  SegmentCursor cursor(trap);
  for (std::size_t step = 0; step < steps; ++step) {
    const double t = dt * static_cast<double>(step);
    const std::size_t segment = cursor.advance(t);
    const Kinematics start = evaluate(trap, segment, t);
    const Kinematics mid = evaluate(trap, segment, t + 0.5 * dt);
    const Kinematics end = evaluate(trap, segment, t + dt);
    const PotentialModel current =
        options.modulation ? potential.perturbed(options.modulation(step)) : potential;
    const bool clamp = lattice;
    const double barrier = clamp ? std::get<Lattice>(current.shape()).depth : 0.0;

    kinetic_half(mid.position - start.position);
    double outside = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = grid.x(i) - mid.position;
      double v = (clamp && !current.inside_support(y)) ? barrier : current.value(y);
      if (compensating) v -= m * y * mid.acceleration;
      psi[i] *= std::polar(1.0, -v * dt / hbar);
      const double density = std::norm(psi[i]);
      mean_y += density * y;
      if (finite_support && std::abs(y - center) > support) outside += density;
    }
    run.max_relative_displacement =
        std::max(run.max_relative_displacement, std::abs(mean_y * grid.dx() - center));
    kinetic_half(end.position - mid.position);

    const double time = t + dt;
    double edge = 0.0;
    for (std::size_t i = 0; i < 4; ++i) edge = std::max({edge, std::norm(psi[i]), std::norm(psi[n - 1 - i])});
    if (edge > options.edge_threshold) {
      std::ostringstream msg;
      msg << "wavefunction density " << edge << " reached the grid edge at t = " << time;
      throw BoundaryContaminationError(msg.str(), edge);
    }
    outside *= grid.dx();
    if (outside > options.escape_threshold) {
      std::ostringstream msg;
      msg << "probability " << outside << " left the central well of the " << potential.name()
          << " trap near t = " << time;
      throw EscapeError(msg.str(), time);
    }
    if (monitor_stride != 0 && ((step + 1) % monitor_stride == 0 || step + 1 == steps)) {
      run.max_transient_energy = std::max(run.max_transient_energy, trap_frame_energy(end));
    }
    take_snapshots(time);
  }

  run.norm_drift = std::abs(run.state.norm() - initial_norm);
  return run;
}

}  // namespace shuttle
