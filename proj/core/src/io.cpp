#include "shuttle/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "shuttle/error.hpp"

namespace shuttle::io {

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw NumericalError("could not format a number");
  return std::string(buf, end);
}

nlohmann::json to_json(const PolyPath& path) {
  return {{"role", to_string(path.role())}, {"duration", path.duration()}, {"coefficients", path.coefficients()}};
}

PolyPath poly_path_from_json(const nlohmann::json& j) {
  try {
    const std::string role = j.at("role").get<std::string>();
    PathRole r;
    if (role == "reference") {
      r = PathRole::Reference;
    } else if (role == "trap") {
      r = PathRole::Trap;
    } else {
      throw ConfigError("path role must be 'reference' or 'trap'");
    }
    return PolyPath(j.at("coefficients").get<std::vector<double>>(), j.at("duration").get<double>(), r);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed path JSON: ") + e.what());
  }
}

nlohmann::json to_json(const ExcitationReport& report) {
  nlohmann::json j = {{"final_excess_energy", report.final_excess_energy},
                      {"max_transient_energy", report.max_transient_energy},
                      {"max_relative_displacement", report.max_relative_displacement},
                      {"mode", to_string(report.mode)}};
  if (report.fidelity) j["fidelity"] = *report.fidelity;
  // The p x_0' term is a numerical oracle rather than a realizable control.
  if (report.mode == DrivingMode::Counterdiabatic) j["non_physical"] = true;
  return j;
}

nlohmann::json to_json(const SensitivityReport& report) {
  return {{"mean_excess_energy", report.mean_excess_energy},
          {"noise_induced_excess", report.delta()},
          {"standard_error", report.standard_error},
          {"n_realizations", report.n_realizations},
          {"noiseless_excess", report.noiseless_excess},
          {"escaped", report.escaped},
          {"steps", report.steps},
          {"dt", report.dt},
          {"seed", report.seed}};
}

nlohmann::json to_json(const RobustnessWindow& window) {
  return {{"half_width", window.half_width}, {"saturated", window.saturated}, {"diagnostic", window.diagnostic}};
}

nlohmann::json to_json(const CostBreakdown& cost) {
  return {{"frequency_window", cost.frequency_window}, {"peak_displacement", cost.peak_displacement},
          {"potential_energy", cost.potential_energy},  {"peak_excursion", cost.peak_excursion},
          {"anharmonic_energy", cost.anharmonic_energy}, {"total", cost.total}};
}

nlohmann::json to_json(const HeatingComparison& c) {
  const auto rate = [](const HeatingRate& r) {
    return nlohmann::json{{"rate", r.rate}, {"standard_error", r.standard_error}, {"psd", r.psd}};
  };
  return {{"omega0", c.omega0},
          {"relevant_frequency", c.relevant_frequency},
          {"first", rate(c.first)},
          {"second", rate(c.second)},
          {"measured_ratio", c.measured_ratio},
          {"measured_ratio_error", c.measured_ratio_error},
          {"psd_ratio", c.psd_ratio},
          {"relative_deviation", c.relative_deviation},
          {"within_tolerance", c.within_tolerance}};
}

void write_path_csv(std::ostream& out, const SampledPath& path) {
  out << "t,x,v,a\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_number(path.time(i)) << ',' << format_number(path.positions()[i]) << ','
        << format_number(path.velocities()[i]) << ',' << format_number(path.accelerations()[i]) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const ExcitationSpectrum& spectrum) {
  out << "omega,excitation\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    out << format_number(spectrum.frequencies()[i]) << ',' << format_number(spectrum.excitation()[i]) << '\n';
  }
}

void write_psd_csv(std::ostream& out, const PsdEstimate& psd) {
  out << "omega,power\n";
  for (std::size_t i = 0; i < psd.omega().size(); ++i) {
    out << format_number(psd.omega()[i]) << ',' << format_number(psd.power()[i]) << '\n';
  }
}

void write_snapshot_csv(std::ostream& out, const QuantumState& state) {
  out << "x,re,im,density\n";
  const auto& psi = state.amplitudes();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out << format_number(state.grid().x(i)) << ',' << format_number(psi[i].real()) << ','
        << format_number(psi[i].imag()) << ',' << format_number(std::norm(psi[i])) << '\n';
  }
}

void write_trace_csv(std::ostream& out, std::span<const double> trace) {
  out << "iteration,cost\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << format_number(trace[i]) << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << contents;
    if (!f) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace shuttle::io
