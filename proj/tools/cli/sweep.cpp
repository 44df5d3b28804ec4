#include <mutex>
#include <sstream>

#include "cli/commands.hpp"
#include "shuttle/error.hpp"
#include "shuttle/io.hpp"
#include "shuttle/noise.hpp"
#include "shuttle/parallel.hpp"

namespace shuttle::cli {

using nlohmann::json;

namespace {

std::vector<double> parse_durations(const Block& block) {
  std::vector<double> durations;
  if (block.has("durations") && block.has("range")) {
    throw ConfigError("sweep: give either 'durations' or 'range', not both");
  }
  if (block.has("range")) {
    const Block range = block.child("range");
    const double start = range.number("start");
    const double stop = range.number("stop");
    const std::size_t count = range.count("count", 0);
    range.finish();
    for (std::size_t i = 0; i < count; ++i) {
      durations.push_back(count == 1 ? start
                                     : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
  } else {
    durations = block.numbers("durations");
  }
  if (durations.empty()) throw ConfigError("sweep: the duration grid is empty");
  for (double t : durations) {
    if (!(t > 0)) throw ConfigError("sweep: durations must be positive");
  }
  return durations;
}

std::string row_text(double tf, double mean, double stderr_, std::size_t n) {
  return io::format_number(tf) + ',' + io::format_number(mean) + ',' + io::format_number(stderr_) + ',' +
         std::to_string(n);
}

}  // namespace

void cmd_sweep(const Block& block, Job& job) {
  const std::string kind = block.text("kind", "simulate");
  const std::vector<double> durations = parse_durations(block);
  const TrapSpec spec = parse_trap_spec(block.child_or_empty("trap"));
  if (spec.method == "file") throw ConfigError("sweep: a trap read from file cannot be rescaled in duration");

  // One evaluator per kind; each returns the finished CSV row for a duration.
  std::function<std::string(const TransportTask&)> evaluate;
  bool parallel_points = false;
  if (kind == "simulate") {
    const SimulateSettings settings = parse_simulate_settings(block, job.task);
    if (!settings.snapshot_times.empty()) throw ConfigError("sweep: snapshots are not written during sweeps");
    evaluate = [settings, spec](const TransportTask& task) {
      const SimulationResult r = simulate(build_design(spec, task).trap, settings, task);
      return row_text(task.duration(), r.report.final_excess_energy, 0.0, 1);
    };
    parallel_points = true;
  } else if (kind == "noise") {
    const PotentialModel lattice = parse_potential(block.child("potential"), job.task);
    if (!lattice.is_lattice()) throw ConfigError("sweep: noise sweeps need a lattice potential");
    const NoiseModel noise = parse_noise(block.child("noise"), job.seed);
    const std::size_t n = block.count("realizations", 1000);
    SensitivityOptions options;
    const std::string engine = block.text("engine", "classical");
    if (engine != "classical" && engine != "quantum") throw ConfigError("sweep.engine must be classical or quantum");
    options.quantum = engine == "quantum";
    options.mode = parse_mode(block);
    options.antithetic = block.flag("antithetic", true);
    options.steps = block.count("steps", 0);
    options.dt = block.number("dt", 0.0);
    options.hbar = job.task.hbar();
    options.threads = job.threads;
    evaluate = [=](const TransportTask& task) {
      const SensitivityReport r = monte_carlo_sensitivity(build_design(spec, task).trap, lattice, noise, n, options);
      return row_text(task.duration(), r.delta(), r.standard_error, r.n_realizations);
    };
  } else {
    throw ConfigError("sweep.kind must be 'simulate' or 'noise'");
  }
  block.finish();

  // The manifest remembers finished rows for this exact job so an interrupted sweep
  // picks up where it stopped; any change to the job starts it over.
  const json identity = {{"task", {{"mass", job.task.mass()},
                                   {"omega", job.task.omega()},
                                   {"distance", job.task.distance()},
                                   {"units", job.task.units().name()}}},
                         {"seed", job.seed},
                         {"sweep", block.input()}};
  const auto manifest_path = job.out / "sweep.manifest.json";
  std::vector<std::optional<std::string>> rows(durations.size());
  if (std::filesystem::exists(manifest_path)) {
    const json manifest = json::parse(io::read_file(manifest_path), nullptr, false);
    if (!manifest.is_discarded() && manifest.value("job", json()) == identity && manifest.contains("rows")) {
      for (const auto& [key, value] : manifest.at("rows").items()) {
        const std::size_t i = std::stoul(key);
        if (i < rows.size() && value.is_string()) rows[i] = value.get<std::string>();
      }
    }
  }
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) missing.push_back(i);
  }
  if (job.log && missing.size() < rows.size()) {
    *job.log << "resuming sweep: " << rows.size() - missing.size() << " of " << rows.size() << " rows already done\n";
  }

  std::mutex lock;
  const auto save_manifest = [&] {
    json done = json::object();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i]) done[std::to_string(i)] = *rows[i];
    }
    io::write_json(manifest_path, {{"job", identity}, {"rows", done}});
  };
  const auto run_point = [&](std::size_t k) {
    const std::size_t i = missing[k];
    std::string row = evaluate(job.task.with_duration(durations[i]));
    const std::lock_guard<std::mutex> guard(lock);
    rows[i] = std::move(row);
    save_manifest();
  };
  if (parallel_points) {
    parallel_for(missing.size(), job.threads, run_point);
  } else {
    for (std::size_t k = 0; k < missing.size(); ++k) run_point(k);
  }

  std::ostringstream csv;
  csv << "t_f,mean_excess,stderr,n\n";
  for (const auto& row : rows) csv << *row << '\n';
  io::write_file(job.out / "sweep.csv", csv.str());
  save_manifest();
}

}  // namespace shuttle::cli
