#include "cli/config.hpp"

#include <cmath>
#include <limits>

#include "shuttle/error.hpp"
#include "shuttle/io.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle::cli {

using nlohmann::json;

const json Block::kEmpty = json::object();

Block::Block(const json& in, json& resolved, std::string name)
    : in_(in), out_(resolved), name_(std::move(name)) {
  if (!in_.is_object()) throw ConfigError("'" + name_ + "' must be a JSON object");
  if (!out_.is_object()) out_ = json::object();
}

void Block::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(name_ + "." + key + ": " + what);
}

const json& Block::lookup(const std::string& key) const {
  used_.insert(key);
  const auto it = in_.find(key);
  if (it == in_.end()) fail(key, "missing required value");
  return *it;
}

double Block::number(const std::string& key) const {
  const json& v = lookup(key);
  if (!v.is_number()) fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "expected a finite number");
  out_[key] = x;
  return x;
}

double Block::number(const std::string& key, double fallback) const {
  if (!has(key)) {
    used_.insert(key);
    out_[key] = fallback;
    return fallback;
  }
  return number(key);
}

std::optional<double> Block::optional_number(const std::string& key) const {
  used_.insert(key);
  if (!has(key) || in_.at(key).is_null()) return std::nullopt;
  return number(key);
}

std::size_t Block::count(const std::string& key, std::size_t fallback) const {
  used_.insert(key);
  if (!has(key)) {
    out_[key] = fallback;
    return fallback;
  }
  const json& v = in_.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(key, "expected a non-negative integer");
  }
  const auto n = v.get<std::size_t>();
  out_[key] = n;
  return n;
}

int Block::integer(const std::string& key, int fallback) const {
  used_.insert(key);
  if (!has(key)) {
    out_[key] = fallback;
    return fallback;
  }
  const json& v = in_.at(key);
  if (!v.is_number_integer()) fail(key, "expected an integer");
  const auto n = v.get<long long>();
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) fail(key, "out of range");
  out_[key] = n;
  return static_cast<int>(n);
}

bool Block::flag(const std::string& key, bool fallback) const {
  used_.insert(key);
  if (!has(key)) {
    out_[key] = fallback;
    return fallback;
  }
  const json& v = in_.at(key);
  if (!v.is_boolean()) fail(key, "expected true or false");
  out_[key] = v.get<bool>();
  return v.get<bool>();
}

std::string Block::text(const std::string& key) const {
  const json& v = lookup(key);
  if (!v.is_string()) fail(key, "expected a string");
  out_[key] = v;
  return v.get<std::string>();
}

std::string Block::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) {
    used_.insert(key);
    out_[key] = fallback;
    return fallback;
  }
  return text(key);
}

std::vector<double> Block::numbers(const std::string& key, std::vector<double> fallback) const {
  used_.insert(key);
  if (!has(key)) {
    out_[key] = fallback;
    return fallback;
  }
  const json& v = in_.at(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> values;
  for (const auto& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) fail(key, "expected an array of finite numbers");
    values.push_back(e.get<double>());
  }
  out_[key] = values;
  return values;
}

const json& Block::raw(const std::string& key) const {
  const json& v = lookup(key);
  out_[key] = v;
  return v;
}

Block Block::child(const std::string& key) const {
  const json& v = lookup(key);
  return Block(v, out_[key], name_ + "." + key);
}

Block Block::child_or_empty(const std::string& key) const {
  used_.insert(key);
  if (!has(key)) return Block(kEmpty, out_[key], name_ + "." + key);
  return child(key);
}

void Block::finish() const {
  for (const auto& [key, value] : in_.items()) {
    if (!used_.count(key)) throw ConfigError("unknown key '" + key + "' in '" + name_ + "'");
  }
}

void Job::warn(const std::string& message) {
  warnings.push_back(message);
  if (log) *log << "warning: " << message << '\n';
}

UnitSystem parse_units(const Block& block) {
  const std::string system = block.text("system", "natural");
  UnitSystem units = UnitSystem::natural();
  if (system == "si") {
    units = UnitSystem::from_si_scales(block.number("length_m"), block.number("time_s"), block.number("mass_kg"));
  } else if (system != "natural") {
    throw ConfigError("units.system must be 'natural' or 'si'");
  }
  block.finish();
  return units;
}

TransportTask parse_task(const Block& block, const UnitSystem& units) {
  const double mass = block.number("mass", 1.0);
  const double omega = block.number("omega", 1.0);
  const double distance = block.number("distance");
  const double duration = block.number("duration");
  block.finish();
  try {
    return TransportTask(mass, omega, distance, duration, units);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("task: ") + e.what());
  }
}

PotentialModel parse_potential(const Block& block, const TransportTask& task) {
  const std::string type = block.text("type", "harmonic");
  std::optional<PotentialModel> model;
  try {
    if (type == "harmonic") {
      model = PotentialModel::harmonic(task.mass(), task.omega());
    } else if (type == "lattice") {
      model = PotentialModel::lattice(task.mass(), block.number("depth"), block.number("wavenumber"),
                                      block.number("phase", 0.0));
    } else if (type == "gaussian") {
      model = PotentialModel::gaussian(task.mass(), block.number("depth"), block.number("waist"));
    } else {
      throw ConfigError(block.name() + ".type must be harmonic, lattice or gaussian");
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(block.name() + ": " + e.what());
  }
  block.finish();
  return *model;
}

NoiseModel parse_noise(const Block& block, std::uint64_t seed) {
  NoiseModel model;
  model.seed = seed;
  try {
    model.target = noise_target_from_string(block.text("target", "position"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(block.name() + ": " + e.what());
  }
  const std::string kind = block.text("kind", "white");
  if (kind == "white") {
    model.kind = WhiteNoise{block.number("intensity", 1.0)};
  } else if (kind == "ou") {
    model.kind = OUNoise{block.number("variance", 1.0), block.number("correlation_time")};
  } else {
    throw ConfigError(block.name() + ".kind must be 'white' or 'ou'");
  }
  model.lambda = block.number("lambda");
  block.finish();
  try {
    validate(model);
  } catch (const InvalidArgument& e) {
    throw ConfigError(block.name() + ": " + e.what());
  }
  return model;
}

DrivingMode parse_mode(const Block& block, const std::string& key) {
  try {
    return driving_mode_from_string(block.text(key, "plain"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(block.name() + "." + key + ": " + e.what());
  }
}

TrapSpec parse_trap_spec(const Block& block) {
  TrapSpec spec;
  spec.method = block.text("method", "sta");
  if (spec.method == "file") {
    spec.file = block.text("file");
  } else if (spec.method == "sta" || spec.method == "boundary" || spec.method == "multinull" ||
             spec.method == "linear") {
    if (spec.method != "linear") spec.continuity_order = block.integer("continuity_order", 2);
    if (spec.method == "multinull") {
      const json& nulls = block.raw("nulls");
      if (!nulls.is_array() || nulls.empty()) throw ConfigError(block.name() + ".nulls must be a non-empty array");
      for (const auto& n : nulls) {
        NullTarget target;
        if (n.is_number()) {
          target.omega = n.get<double>();
        } else if (n.is_object() && n.contains("omega") && n.at("omega").is_number() && n.size() <= 2 &&
                   (n.size() == 1 || (n.contains("flat") && n.at("flat").is_boolean()))) {
          target.omega = n.at("omega").get<double>();
          target.flat = n.value("flat", false);
        } else {
          throw ConfigError(block.name() + ".nulls entries must be numbers or {\"omega\": w, \"flat\": bool}");
        }
        spec.nulls.push_back(target);
      }
      if (spec.nulls.size() > kMaxNullTargets) {
        throw ConfigError(block.name() + ".nulls lists " + std::to_string(spec.nulls.size()) +
                          " frequencies; at most " + std::to_string(kMaxNullTargets) + " are supported");
      }
    }
  } else {
    throw ConfigError(block.name() + ".method must be sta, boundary, multinull, linear or file");
  }
  block.finish();
  return spec;
}

Design build_design(const TrapSpec& spec, const TransportTask& task) {
  if (spec.method == "file") {
    const PolyPath path = io::poly_path_from_json(json::parse(io::read_file(spec.file)));
    return {path.with_role(PathRole::Trap), std::nullopt};
  }
  try {
    if (task.distance() == 0.0) {
      // Nothing to move: every method degenerates to the trap resting at the origin.
      return {PolyPath({0.0}, task.duration(), PathRole::Trap), PolyPath({0.0}, task.duration(), PathRole::Reference)};
    }
    if (spec.method == "linear") {
      return {PolyPath({0.0, task.distance()}, task.duration(), PathRole::Trap), std::nullopt};
    }
    if (spec.method == "multinull") {
      return {design_multinull(task, std::span<const NullTarget>(spec.nulls), spec.continuity_order), std::nullopt};
    }
    const PolyPath reference = solve_boundary_polynomial(task, spec.continuity_order);
    if (spec.method == "boundary") return {reference.with_role(PathRole::Trap), reference};
    return {trap_from_reference(reference, task), reference};
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("trap design: ") + e.what());
  }
}

}  // namespace shuttle::cli
