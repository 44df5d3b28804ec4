#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "shuttle/classical.hpp"
#include "shuttle/quantum.hpp"

namespace shuttle::cli {

/// Everything cmd_simulate needs apart from the trap path.
struct SimulateSettings {
  PotentialModel potential;
  DrivingMode mode = DrivingMode::Plain;
  std::string engine = "classical";  // classical | quantum
  double q0 = 0.0;                   // offset from rest at the bottom of the well
  double p0 = 0.0;
  std::size_t steps = 0;  // classical; 0 selects the default
  double dt = 0.0;        // quantum; 0 selects the default
  std::size_t grid_points = 0;
  std::vector<double> snapshot_times{};
};

/// Reads the simulate keys of `block` (everything except the trap).
SimulateSettings parse_simulate_settings(const Block& block, const TransportTask& task);

struct SimulationResult {
  ExcitationReport report;
  std::size_t steps = 0;
  std::optional<QuantumRun> quantum;
};

SimulationResult simulate(const TrapPath& trap, const SimulateSettings& settings, const TransportTask& task);

nlohmann::json report_json(const SimulationResult& result, const SimulateSettings& settings);

void cmd_design(const Block& block, Job& job);
void cmd_simulate(const Block& block, Job& job);
void cmd_spectrum(const Block& block, Job& job);
void cmd_noise(const Block& block, Job& job);
void cmd_oct(const Block& block, Job& job);
void cmd_sweep(const Block& block, Job& job);

}  // namespace shuttle::cli
