#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "shuttle/classical.hpp"
#include "shuttle/fourier.hpp"
#include "shuttle/noise.hpp"
#include "shuttle/path.hpp"
#include "shuttle/potential.hpp"
#include "shuttle/task.hpp"

namespace shuttle::cli {

/// Strict reader over one JSON object. Every value read (or defaulted) is copied into
/// a resolved tree so the job can be echoed with all defaults filled in; finish()
/// rejects keys nobody asked for.
class Block {
 public:
  Block(const nlohmann::json& in, nlohmann::json& resolved, std::string name);

  const std::string& name() const noexcept { return name_; }
  bool has(const std::string& key) const { return in_.contains(key); }
  const nlohmann::json& input() const noexcept { return in_; }

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback = {}) const;
  /// Raw value, echoed verbatim.
  const nlohmann::json& raw(const std::string& key) const;

  Block child(const std::string& key) const;
  /// An absent child reads as an empty object.
  Block child_or_empty(const std::string& key) const;

  void finish() const;

 private:
  const nlohmann::json& lookup(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  const nlohmann::json& in_;
  nlohmann::json& out_;
  std::string name_;
  mutable std::set<std::string> used_;
  static const nlohmann::json kEmpty;
};

/// Global settings shared by every subcommand.
struct Job {
  TransportTask task;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::filesystem::path out;
  std::ostream* log = nullptr;
  std::vector<std::string> warnings;

  void warn(const std::string& message);
};

UnitSystem parse_units(const Block& block);
TransportTask parse_task(const Block& block, const UnitSystem& units);

/// {"type": "harmonic"} uses the task frequency; lattice and gaussian take their own
/// parameters and the task mass.
PotentialModel parse_potential(const Block& block, const TransportTask& task);

NoiseModel parse_noise(const Block& block, std::uint64_t seed);
DrivingMode parse_mode(const Block& block, const std::string& key = "mode");

/// How the trap path is produced.
struct TrapSpec {
  std::string method = "sta";  // sta | boundary | multinull | linear | file
  int continuity_order = 2;
  std::vector<NullTarget> nulls;
  std::filesystem::path file;
};

TrapSpec parse_trap_spec(const Block& block);

struct Design {
  PolyPath trap;
  std::optional<PolyPath> reference;
};

/// Builds the trap for the task; the file method ignores the task duration.
Design build_design(const TrapSpec& spec, const TransportTask& task);

}  // namespace shuttle::cli
