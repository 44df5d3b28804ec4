#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "shuttle/classical.hpp"
#include "shuttle/fourier.hpp"
#include "shuttle/noise.hpp"
#include "shuttle/oct.hpp"
#include "shuttle/path.hpp"
#include "shuttle/quantum.hpp"

namespace shuttle::io {

/// Shortest decimal that round-trips; keeps CSV output byte-stable across runs.
std::string format_number(double v);

nlohmann::json to_json(const PolyPath& path);
PolyPath poly_path_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExcitationReport& report);
nlohmann::json to_json(const SensitivityReport& report);
nlohmann::json to_json(const RobustnessWindow& window);
nlohmann::json to_json(const CostBreakdown& cost);
nlohmann::json to_json(const HeatingComparison& comparison);

/// Columns t,x,v,a.
void write_path_csv(std::ostream& out, const SampledPath& path);
/// Columns omega,excitation.
void write_spectrum_csv(std::ostream& out, const ExcitationSpectrum& spectrum);
/// Columns omega,power.
void write_psd_csv(std::ostream& out, const PsdEstimate& psd);
/// Columns x,re,im,density.
void write_snapshot_csv(std::ostream& out, const QuantumState& state);
/// Columns iteration,cost.
void write_trace_csv(std::ostream& out, std::span<const double> trace);

/// Writes text atomically enough for our purposes: to a temporary sibling, then renamed.
void write_file(const std::filesystem::path& path, const std::string& contents);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
std::string read_file(const std::filesystem::path& path);

}  // namespace shuttle::io
