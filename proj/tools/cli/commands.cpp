#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "shuttle/error.hpp"
#include "shuttle/fourier.hpp"
#include "shuttle/grid.hpp"
#include "shuttle/io.hpp"
#include "shuttle/noise.hpp"
#include "shuttle/oct.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle::cli {

using nlohmann::json;

namespace {

template <class Writer>
void write_csv(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  io::write_file(path, out.str());
}

json piecewise_json(const PiecewisePath& path) {
  json pieces = json::array();
  for (std::size_t j = 0; j < path.segments(); ++j) pieces.push_back(path.piece(j));
  return {{"knots", path.knots()},
          {"pieces", pieces},
          {"rest_before", path.rest_before()},
          {"rest_after", path.rest_after()}};
}

double scaled(double energy, const TransportTask& task) {
  const double scale = task.energy_scale();
  return scale > 0 ? energy / scale : 0.0;
}

void check_frequency(const PotentialModel& potential, const TransportTask& task, Job& job) {
  const double w = potential.frequency();
  if (std::abs(w - task.omega()) > 1e-9 * task.omega()) {
    std::ostringstream msg;
    msg << "the trap path is designed for omega = " << task.omega() << " but the " << potential.name()
        << " potential oscillates at " << w;
    job.warn(msg.str());
  }
}

PotentialModel require_lattice(const PotentialModel& potential) {
  if (!potential.is_lattice()) throw ConfigError("noise analyses need a lattice potential");
  return potential;
}

std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", i);
  return buf;
}

}  // namespace

SimulateSettings parse_simulate_settings(const Block& block, const TransportTask& task) {
  SimulateSettings s{parse_potential(block.child_or_empty("potential"), task)};
  s.mode = parse_mode(block);
  s.engine = block.text("engine", "classical");
  if (s.engine != "classical" && s.engine != "quantum") {
    throw ConfigError(block.name() + ".engine must be 'classical' or 'quantum'");
  }
  const Block initial = block.child_or_empty("initial");
  s.q0 = initial.number("q0", 0.0);
  s.p0 = initial.number("p0", 0.0);
  initial.finish();
  s.steps = block.count("steps", 0);
  s.dt = block.number("dt", 0.0);
  if (s.dt < 0) throw ConfigError(block.name() + ".dt must be non-negative");
  s.grid_points = block.count("grid_points", 0);
  s.snapshot_times = block.numbers("snapshot_times");
  if (s.engine == "classical" && !s.snapshot_times.empty()) {
    throw ConfigError(block.name() + ".snapshot_times needs the quantum engine");
  }
  return s;
}

SimulationResult simulate(const TrapPath& trap, const SimulateSettings& s, const TransportTask& task) {
  const PotentialModel& potential = s.potential;
  const double x_start = initial_position(trap);
  const double x_end = final_position(trap);
  SimulationResult result;
  if (s.engine == "classical") {
    ClassicalState initial = rest_state(potential, x_start);
    initial.q += s.q0;
    initial.p += s.p0;
    const std::size_t steps =
        s.steps ? s.steps : default_integration_steps(potential.frequency(), duration_of(trap));
    ClassicalOptions options;
    options.mode = s.mode;
    const ClassicalRun run = integrate_classical(trap, potential, initial, steps, options);
    result.report = run.report;
    result.steps = run.steps;
    return result;
  }

  const double hbar = task.hbar();
  GridOptions grid_options;
  grid_options.points = s.grid_points;
  const Grid grid = transport_grid(trap, potential, hbar, grid_options);
  QuantumState psi0 = ground_state(potential, grid, x_start + s.q0, hbar).state;
  if (s.p0 != 0.0) {
    auto& a = psi0.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= std::polar(1.0, s.p0 * grid.x(i) / hbar);
  }
  QuantumOptions options;
  options.mode = s.mode;
  options.dt = s.dt;
  options.snapshot_times = s.snapshot_times;
  QuantumRun run = propagate_quantum(trap, potential, psi0, hbar, options);
  const GroundState final_ground = ground_state(potential, grid, x_end, hbar);
  // The monitor measures energy above the potential minimum; report it above the ground state.
  const double zero_point = final_ground.energy - potential.minimum_value();
  result.report.final_excess_energy = energy_expectation(run.state, potential, x_end, hbar) - final_ground.energy;
  result.report.fidelity = fidelity(run.state, final_ground.state);
  result.report.max_transient_energy = std::max(0.0, run.max_transient_energy - zero_point);
  result.report.max_relative_displacement = run.max_relative_displacement;
  result.report.mode = s.mode;
  result.steps = run.steps;
  result.quantum = std::move(run);
  return result;
}

json report_json(const SimulationResult& result, const SimulateSettings& s) {
  json j = io::to_json(result.report);
  j["engine"] = s.engine;
  j["potential"] = s.potential.name();
  j["steps"] = result.steps;
  j["initial_offset"] = {{"q0", s.q0}, {"p0", s.p0}};
  if (result.quantum) {
    const QuantumRun& run = *result.quantum;
    const Grid& g = run.state.grid();
    j["dt"] = run.dt;
    j["norm_drift"] = run.norm_drift;
    j["grid"] = {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"points", g.size()}};
  }
  return j;
}

void cmd_design(const Block& block, Job& job) {
  const TrapSpec spec = parse_trap_spec(block.child_or_empty("trap"));
  const std::size_t samples = block.count("samples", 1001);
  block.finish();
  if (samples < 2) throw ConfigError("design.samples must be at least 2");

  const Design design = build_design(spec, job.task);
  const PolyPath& trap = design.trap;
  const TransportTask task = job.task.with_duration(trap.duration());
  if (task.distance() == 0.0) job.warn("distance is zero: the emitted path keeps the trap at rest");

  json path = {{"trap", io::to_json(trap)}};
  if (design.reference) path["reference"] = io::to_json(*design.reference);
  io::write_json(job.out / "path.json", path);
  write_csv(job.out / "path.csv", [&](std::ostream& o) { io::write_path_csv(o, SampledPath::from(trap, samples)); });

  double peak = 0.0;
  constexpr std::size_t kDense = 10001;
  for (std::size_t i = 0; i < kDense; ++i) {
    const double t = trap.duration() * static_cast<double>(i) / static_cast<double>(kDense - 1);
    peak = std::max(peak, std::abs(trap.acceleration(t)));
  }
  const double bound = peak_acceleration_bound(task);
  const double adiabatic = adiabatic_timescale(task);
  const bool discontinuous = !starts_and_ends_at_rest(trap);
  const TransientSummary transient = transient_summary(trap, task);
  const auto excitation = [&](double w) {
    return excitation_from_transform(task.mass(), acceleration_transform(trap, w, discontinuous));
  };

  json report = {
      {"method", spec.method},
      {"degree", trap.degree()},
      {"duration", trap.duration()},
      {"peak_acceleration", peak},
      {"acceleration_bound", bound},
      {"acceleration_ratio", bound > 0 ? peak / bound : 0.0},
      {"adiabatic_timescale", adiabatic},
      {"duration_over_adiabatic", adiabatic > 0 ? trap.duration() / adiabatic : 0.0},
      {"boundary_velocity_jumps", discontinuous},
      {"max_relative_displacement", transient.max_relative_displacement},
      {"max_transient_energy", transient.max_transient_energy},
      {"excitation_at_omega", excitation(task.omega())},
      {"excitation_at_omega_scaled", scaled(excitation(task.omega()), task)},
  };
  if (!spec.nulls.empty()) {
    json nulls = json::array();
    for (const NullTarget& n : spec.nulls) {
      nulls.push_back({{"omega", n.omega}, {"flat", n.flat}, {"excitation", excitation(n.omega)}});
    }
    report["nulls"] = nulls;
  }
  report["warnings"] = job.warnings;
  io::write_json(job.out / "feasibility.json", report);
}

void cmd_simulate(const Block& block, Job& job) {
  const TrapSpec spec = parse_trap_spec(block.child_or_empty("trap"));
  const SimulateSettings settings = parse_simulate_settings(block, job.task);
  block.finish();
  const Design design = build_design(spec, job.task);
  check_frequency(settings.potential, job.task, job);

  const SimulationResult result = simulate(design.trap, settings, job.task);
  json report = report_json(result, settings);
  if (result.quantum) {
    json index = json::array();
    const auto& snaps = result.quantum->snapshots;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      const std::string name = snapshot_name(i);
      write_csv(job.out / "snapshots" / name, [&](std::ostream& o) { io::write_snapshot_csv(o, snaps[i].state); });
      index.push_back({{"time", snaps[i].time}, {"file", "snapshots/" + name}});
    }
    report["snapshots"] = index;
  }
  report["final_excess_energy_scaled"] = scaled(result.report.final_excess_energy, job.task);
  report["warnings"] = job.warnings;
  io::write_json(job.out / "report.json", report);
}

void cmd_spectrum(const Block& block, Job& job) {
  const TrapSpec spec = parse_trap_spec(block.child_or_empty("trap"));
  const double w = job.task.omega();
  const double omega_min = block.number("omega_min", 0.0);
  const double omega_max = block.number("omega_max", 3.0 * w);
  const std::size_t points = block.count("points", 1001);
  const Block window_block = block.child_or_empty("window");
  const double omega0 = window_block.number("omega0", w);
  const double epsilon = window_block.number("epsilon", 1e-4 * job.task.energy_scale());
  WindowOptions window_options;
  window_options.half_range = window_block.number("half_range", 0.0);
  window_block.finish();
  block.finish();
  if (epsilon <= 0) throw ConfigError("spectrum.window.epsilon must be positive (set it explicitly when d = 0)");

  const Design design = build_design(spec, job.task);
  const TrapPath trap = design.trap;
  const double m = job.task.mass();
  ExcitationSpectrum spectrum = [&] {
    try {
      return excitation_spectrum(trap, m, omega_min, omega_max, points, job.threads);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("spectrum: ") + e.what());
    }
  }();
  write_csv(job.out / "spectrum.csv", [&](std::ostream& o) { io::write_spectrum_csv(o, spectrum); });

  const RobustnessWindow window = robustness_window(trap, m, omega0, epsilon, window_options);
  const bool discontinuous = !starts_and_ends_at_rest(design.trap);
  json j = io::to_json(window);
  j["omega0"] = omega0;
  j["epsilon"] = epsilon;
  j["excitation_at_omega0"] =
      excitation_from_transform(m, acceleration_transform(design.trap, omega0, discontinuous));
  j["warnings"] = job.warnings;
  io::write_json(job.out / "window.json", j);
}

namespace {

void noise_sensitivity(const Block& block, Job& job, const PotentialModel& lattice, const NoiseModel& noise) {
  const TrapSpec spec = parse_trap_spec(block.child_or_empty("trap"));
  const std::size_t n = block.count("realizations", 1000);
  SensitivityOptions options;
  const std::string engine = block.text("engine", "classical");
  if (engine != "classical" && engine != "quantum") throw ConfigError("noise.engine must be classical or quantum");
  options.quantum = engine == "quantum";
  options.mode = parse_mode(block);
  options.antithetic = block.flag("antithetic", true);
  options.steps = block.count("steps", 0);
  options.dt = block.number("dt", 0.0);
  options.hbar = job.task.hbar();
  options.threads = job.threads;
  block.finish();

  const Design design = build_design(spec, job.task);
  check_frequency(lattice, job.task, job);
  const SensitivityReport report = monte_carlo_sensitivity(design.trap, lattice, noise, n, options);
  json j = io::to_json(report);
  j["target"] = to_string(noise.target);
  j["lambda"] = noise.lambda;
  j["engine"] = engine;
  j["noise_induced_excess_scaled"] = scaled(report.delta(), job.task);
  j["warnings"] = job.warnings;
  io::write_json(job.out / "sensitivity.json", j);
}

void noise_psd(const Block& block, Job& job, const NoiseModel& noise) {
  const std::size_t n = block.count("samples", std::size_t{1} << 16);
  const double tau = correlation_time(noise.kind);
  const double dt = block.number("dt", std::isfinite(tau) ? tau / 20.0 : 0.01);
  WelchOptions welch;
  welch.segment_length = block.count("segment_length", 0);
  block.finish();
  if (dt <= 0) throw ConfigError("noise.dt must be positive");

  const std::vector<double> xi = generate_noise(noise.kind, dt, n, noise.seed);
  const PsdEstimate psd = [&] {
    try {
      return psd_estimate(xi, dt, welch);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("noise.psd: ") + e.what());
    }
  }();
  write_csv(job.out / "psd.csv", [&](std::ostream& o) { io::write_psd_csv(o, psd); });

  // Mean estimate/analytic ratio over the lower half of the band, away from Nyquist.
  double ratio = 0.0;
  std::size_t bins = 0;
  const double nyquist = std::acos(-1.0) / dt;
  for (std::size_t i = 1; i < psd.omega().size(); ++i) {
    if (psd.omega()[i] > 0.5 * nyquist) break;
    const double s = analytic_psd(noise.kind, psd.omega()[i]);
    if (s > 0) {
      ratio += psd.power()[i] / s;
      ++bins;
    }
  }
  json j = {{"samples", n},
            {"dt", dt},
            {"segments", psd.segments()},
            {"seed", noise.seed},
            {"mean_ratio_to_analytic", bins ? ratio / static_cast<double>(bins) : 0.0},
            {"warnings", job.warnings}};
  io::write_json(job.out / "psd.json", j);
}

void noise_heating(const Block& block, Job& job, const PotentialModel& lattice, const NoiseModel& first) {
  const NoiseModel second = parse_noise(block.child("second"), job.seed);
  HeatingOptions options;
  options.duration = block.number("duration", 0.0);
  options.realizations = block.count("realizations", 1000);
  options.initial_energy = block.number("initial_energy", -1.0);
  options.samples = block.count("samples", 64);
  options.threads = job.threads;
  block.finish();
  if (second.target != first.target) throw ConfigError("noise.second must perturb the same lattice parameter");

  const HeatingComparison c = heating_rate_check(lattice, first, second, options);
  json j = io::to_json(c);
  j["target"] = to_string(first.target);
  j["seed"] = job.seed;
  j["warnings"] = job.warnings;
  io::write_json(job.out / "heating.json", j);
}

}  // namespace

void cmd_noise(const Block& block, Job& job) {
  const std::string analysis = block.text("analysis", "sensitivity");
  const NoiseModel noise = parse_noise(block.child("noise"), job.seed);
  if (analysis == "psd") {
    noise_psd(block, job, noise);
    return;
  }
  const PotentialModel lattice = require_lattice(parse_potential(block.child("potential"), job.task));
  if (analysis == "sensitivity") {
    noise_sensitivity(block, job, lattice, noise);
  } else if (analysis == "heating") {
    noise_heating(block, job, lattice, noise);
  } else {
    throw ConfigError("noise.analysis must be sensitivity, psd or heating");
  }
}

namespace {

void write_poly_outputs(Job& job, const PolyPath& reference, const PolyPath& trap, std::size_t samples) {
  io::write_json(job.out / "path.json", {{"reference", io::to_json(reference)}, {"trap", io::to_json(trap)}});
  write_csv(job.out / "path.csv", [&](std::ostream& o) { io::write_path_csv(o, SampledPath::from(trap, samples)); });
}

}  // namespace

void cmd_oct(const Block& block, Job& job) {
  const std::string problem = block.text("problem", "bang_bang");
  const std::size_t samples = block.count("samples", 1001);
  if (samples < 2) throw ConfigError("oct.samples must be at least 2");
  const TransportTask& task = job.task;

  if (problem == "bang_bang") {
    const double delta = block.number("max_relative_displacement");
    block.finish();
    if (delta <= 0) throw ConfigError("oct.max_relative_displacement must be positive");
    const BangBangResult r = min_time_bang_bang(task, delta);
    json path = {{"reference", nullptr}, {"trap", nullptr}};
    if (r.trap) {
      path["reference"] = piecewise_json(*r.reference);
      path["trap"] = piecewise_json(*r.trap);
    } else {
      job.warn("distance is zero: no transport needed");
    }
    io::write_json(job.out / "path.json", path);
    write_csv(job.out / "path.csv", [&](std::ostream& o) {
      if (r.trap) {
        io::write_path_csv(o, sample(TrapPath(*r.trap), samples));
      } else {
        o << "t,x,v,a\n";
      }
    });
    io::write_json(job.out / "report.json", {{"problem", problem},
                                             {"max_relative_displacement", delta},
                                             {"min_duration", r.min_duration},
                                             {"verified_excess", r.verified_excess},
                                             {"requested_duration", task.duration()},
                                             {"feasible_at_requested", task.duration() >= r.min_duration},
                                             {"warnings", job.warnings}});
    return;
  }

  if (problem == "smooth") {
    ControlConstraint constraint;
    constraint.max_relative_displacement = block.number("max_relative_displacement");
    constraint.max_first_derivative = block.optional_number("max_first_derivative");
    constraint.max_second_derivative = block.optional_number("max_second_derivative");
    SmoothOptions options;
    options.free_parameters = block.integer("free_parameters", options.free_parameters);
    options.verification_points = block.count("verification_points", options.verification_points);
    options.restarts = block.integer("restarts", options.restarts);
    options.max_iterations = block.integer("max_iterations", options.max_iterations);
    options.bisection_tolerance = block.number("bisection_tolerance", options.bisection_tolerance);
    block.finish();
    const SmoothResult r = [&] {
      try {
        return constrained_smooth(task, constraint, options);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("oct: ") + e.what());
      }
    }();
    write_poly_outputs(job, r.reference, r.trap, samples);
    json report = {{"problem", problem},
                   {"feasible", r.feasible},
                   {"max_relative_displacement", r.max_relative_displacement},
                   {"max_first_derivative", r.max_first_derivative},
                   {"max_second_derivative", r.max_second_derivative},
                   {"slack", r.slack},
                   {"min_feasible_duration", r.min_feasible_duration ? json(*r.min_feasible_duration) : json()},
                   {"summary", r.report},
                   {"warnings", job.warnings}};
    io::write_json(job.out / "report.json", report);
    return;
  }

  if (problem == "robust") {
    const Block wb = block.child_or_empty("weights");
    RobustCostWeights weights;
    weights.frequency_window = wb.number("frequency_window", 1.0);
    weights.peak_displacement = wb.number("peak_displacement", 0.0);
    weights.potential_energy = wb.number("potential_energy", 0.0);
    weights.peak_excursion = wb.number("peak_excursion", 0.0);
    weights.anharmonic_energy = wb.number("anharmonic_energy", 0.0);
    wb.finish();
    RobustOptions options;
    options.free_parameters = block.integer("free_parameters", options.free_parameters);
    options.restarts = block.integer("restarts", options.restarts);
    options.max_iterations = block.integer("max_iterations", options.max_iterations);
    options.seed = job.seed;
    options.threads = job.threads;
    if (block.has("gaussian")) {
      const Block g = block.child("gaussian");
      options.gaussian = PotentialModel::gaussian(task.mass(), g.number("depth"), g.number("waist"));
      g.finish();
    }
    block.finish();
    const RobustResult r = [&] {
      try {
        return optimize_robust_cost(task, weights, options);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("oct: ") + e.what());
      }
    }();
    write_poly_outputs(job, r.reference, r.trap, samples);
    write_csv(job.out / "trace.csv", [&](std::ostream& o) { io::write_trace_csv(o, r.trace); });
    io::write_json(job.out / "report.json", {{"problem", problem},
                                             {"cost", io::to_json(r.cost)},
                                             {"seed_cost", io::to_json(r.seed_cost)},
                                             {"converged", r.converged},
                                             {"warning", r.warning},
                                             {"nominal_excess", r.nominal_excess},
                                             {"seed", job.seed},
                                             {"warnings", job.warnings}});
    return;
  }
  throw ConfigError("oct.problem must be bang_bang, smooth or robust");
}

}  // namespace shuttle::cli
