#include "cli/cli.hpp"

#include <CLI11.hpp>
#include <array>
#include <cstdint>
#include <optional>
#include <thread>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "shuttle/error.hpp"
#include "shuttle/io.hpp"

namespace shuttle::cli {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 6> kCommands = {"design", "simulate", "spectrum", "noise", "oct", "sweep"};

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

bool is_command(const std::string& key) {
  for (const char* c : kCommands) {
    if (key == c) return true;
  }
  return false;
}

void dispatch(const std::string& command, const Block& block, Job& job) {
  if (command == "design") return cmd_design(block, job);
  if (command == "simulate") return cmd_simulate(block, job);
  if (command == "spectrum") return cmd_spectrum(block, job);
  if (command == "noise") return cmd_noise(block, job);
  if (command == "oct") return cmd_oct(block, job);
  return cmd_sweep(block, job);
}

int execute(const std::string& command, const Flags& flags, std::ostream& out, std::ostream& err) {
  json root;
  try {
    root = json::parse(io::read_file(flags.config));
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + flags.config + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("the config must be a JSON object");

  std::vector<std::string> blocks;
  for (const auto& [key, value] : root.items()) {
    if (is_command(key)) blocks.push_back(key);
  }
  if (blocks.size() != 1) {
    throw ConfigError("the config must contain exactly one command block, found " + std::to_string(blocks.size()));
  }
  if (blocks.front() != command) {
    throw ConfigError("the config holds a '" + blocks.front() + "' block but the subcommand is '" + command + "'");
  }

  json resolved = json::object();
  const Block top(root, resolved, "config");
  const UnitSystem units = parse_units(top.child_or_empty("units"));
  const TransportTask task = parse_task(top.child("task"), units);

  std::uint64_t seed = top.count("seed", 0);
  if (flags.seed) seed = *flags.seed;
  resolved["seed"] = seed;

  unsigned threads = static_cast<unsigned>(top.count("threads", 1));
  if (flags.threads) threads = *flags.threads;
  resolved["threads"] = threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  std::string output;
  if (flags.out) {
    output = *flags.out;
    top.text("output", output);
    resolved["output"] = output;
  } else if (top.has("output")) {
    output = top.text("output");
  } else {
    throw ConfigError("no output directory: pass --out, set SHUTTLE_OUT or add \"output\" to the config");
  }

  Job job{task, seed, threads, output, &err, {}};
  const Block block = top.child(command);
  top.finish();

  out << command << ": seed " << seed << ", output " << output << '\n';
  try {
    dispatch(command, block, job);
  } catch (const Error& e) {
    // Physics and numerics failures still leave a reproducible record behind.
    if (e.kind() != ErrorKind::Config && e.kind() != ErrorKind::InvalidArgument) {
      io::write_json(job.out / "resolved_config.json", resolved);
      io::write_json(job.out / "error.json",
                     {{"message", e.what()}, {"exit_code", exit_code_for(e.kind())}, {"seed", seed}});
    }
    throw;
  }
  io::write_json(job.out / "resolved_config.json", resolved);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transport protocol design, simulation and noise analysis", "shuttle"};
  app.require_subcommand(1);
  Flags flags;
  const std::string prefix = kEnvPrefix;
  app.add_option("--config", flags.config, "JSON job description")->envname(prefix + "CONFIG")->required();
  app.add_option("--out", flags.out, "output directory (overrides the config)")->envname(prefix + "OUT");
  app.add_option("--seed", flags.seed, "random seed (overrides the config)")->envname(prefix + "SEED");
  app.add_option("--threads", flags.threads, "worker threads, 0 for all cores")->envname(prefix + "THREADS");
  for (const char* name : kCommands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, flags, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"shuttle"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace shuttle::cli
