#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli/cli.hpp"
#include "shuttle/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / "shuttle_cli_test" / info->name();
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path config(const std::string& name, const json& j) const {
    const fs::path p = dir / name;
    shuttle::io::write_json(p, j);
    return p;
  }

  int run(const std::string& command, const fs::path& cfg, const fs::path& out,
          std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {command, "--config", cfg.string(), "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    std::ostringstream o;
    err.str("");
    return shuttle::cli::run(args, o, err);
  }

  static json read(const fs::path& p) { return json::parse(shuttle::io::read_file(p)); }

  static json task(double d = 1.0, double tf = 6.283185307179586) {
    return {{"distance", d}, {"duration", tf}};
  }

  fs::path dir;
  std::ostringstream err;
};

TEST_F(Cli, DesignWritesPathCsvAndFeasibility) {
  const auto cfg = config("c.json", {{"task", task()}, {"design", {{"trap", {{"method", "sta"}}}}}});
  ASSERT_EQ(run("design", cfg, dir / "out"), 0) << err.str();
  for (const char* f : {"path.json", "path.csv", "feasibility.json", "resolved_config.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  const json feas = read(dir / "out" / "feasibility.json");
  EXPECT_LT(feas.at("excitation_at_omega").get<double>(), 1e-20);
  EXPECT_GE(feas.at("acceleration_ratio").get<double>(), 1.0);
}

TEST_F(Cli, TooManyNullsIsAConfigError) {
  const json nulls = {1, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8};
  const auto cfg = config("c.json", {{"task", task(1, 10)}, {"design", {{"trap", {{"method", "multinull"}, {"nulls", nulls}}}}}});
  EXPECT_EQ(run("design", cfg, dir / "out"), 2);
}

TEST_F(Cli, ZeroDistanceEmitsRestingPathWithWarning) {
  const auto cfg = config("c.json", {{"task", task(0.0)}, {"design", json::object()}});
  ASSERT_EQ(run("design", cfg, dir / "out"), 0) << err.str();
  const json feas = read(dir / "out" / "feasibility.json");
  EXPECT_EQ(feas.at("warnings").size(), 1u);
  EXPECT_EQ(read(dir / "out" / "path.json").at("trap").at("coefficients"), json({0.0}));
}

TEST_F(Cli, SchemaViolationsAreRejected) {
  const auto unknown = config("a.json", {{"task", task()}, {"design", {{"colour", "red"}}}});
  EXPECT_EQ(run("design", unknown, dir / "o"), 2);
  const auto two = config("b.json", {{"task", task()}, {"design", json::object()}, {"oct", json::object()}});
  EXPECT_EQ(run("design", two, dir / "o"), 2);
  const auto mismatch = config("c.json", {{"task", task()}, {"design", json::object()}});
  EXPECT_EQ(run("simulate", mismatch, dir / "o"), 2);
  const auto wrong_type = config("d.json", {{"task", {{"distance", "far"}, {"duration", 1}}}, {"design", json::object()}});
  EXPECT_EQ(run("design", wrong_type, dir / "o"), 2);
  EXPECT_EQ(run("design", dir / "missing.json", dir / "o"), 2);
  EXPECT_EQ(run("design", mismatch, dir / "o", {"--seed", "abc"}), 2);
}

TEST_F(Cli, SimulateExitCodes) {
  const auto ok = config("ok.json", {{"task", task()}, {"simulate", {{"engine", "quantum"}}}});
  ASSERT_EQ(run("simulate", ok, dir / "ok"), 0) << err.str();
  const json report = read(dir / "ok" / "report.json");
  EXPECT_GT(report.at("fidelity").get<double>(), 1 - 1e-6);

  const auto escape = config("esc.json", {{"task", task(10, 0.5)},
                                          {"simulate", {{"trap", {{"method", "boundary"}}},
                                                        {"potential", {{"type", "gaussian"}, {"depth", 16}, {"waist", 2}}}}}});
  EXPECT_EQ(run("simulate", escape, dir / "esc"), 3);
  EXPECT_TRUE(fs::exists(dir / "esc" / "error.json"));

  const auto edge = config("edge.json", {{"task", task()}, {"simulate", {{"engine", "quantum"}, {"initial", {{"p0", 30}}}}}});
  EXPECT_EQ(run("simulate", edge, dir / "edge"), 4);
}

TEST_F(Cli, ResolvedConfigReproducesTheRun) {
  const auto cfg = config("c.json", {{"task", task()}, {"spectrum", {{"points", 101}}}});
  ASSERT_EQ(run("spectrum", cfg, dir / "a"), 0) << err.str();
  const fs::path resolved = dir / "a" / "resolved_config.json";
  ASSERT_EQ(run("spectrum", resolved, dir / "b"), 0) << err.str();
  EXPECT_EQ(shuttle::io::read_file(dir / "a" / "spectrum.csv"), shuttle::io::read_file(dir / "b" / "spectrum.csv"));
  EXPECT_EQ(read(resolved).at("spectrum").at("omega_max").get<double>(), 3.0);
}

TEST_F(Cli, EnvironmentFillsMissingFlags) {
  const auto cfg = config("c.json", {{"task", task()}, {"design", json::object()}});
  ::setenv("SHUTTLE_SEED", "77", 1);
  const int code = run("design", cfg, dir / "out");
  ::unsetenv("SHUTTLE_SEED");
  ASSERT_EQ(code, 0) << err.str();
  EXPECT_EQ(read(dir / "out" / "resolved_config.json").at("seed").get<int>(), 77);
  ASSERT_EQ(run("design", cfg, dir / "out2", {"--seed", "5"}), 0);
  EXPECT_EQ(read(dir / "out2" / "resolved_config.json").at("seed").get<int>(), 5);
}

TEST_F(Cli, SweepEmptyGridSinglePointAndResume) {
  const auto empty = config("e.json", {{"task", task()}, {"sweep", {{"durations", json::array()}}}});
  EXPECT_EQ(run("sweep", empty, dir / "e"), 2);

  const json sim = {{"trap", {{"method", "boundary"}}}};
  const auto single = config("s.json", {{"task", task(1, 5)}, {"sweep", {{"durations", {5.0}}, {"trap", sim.at("trap")}}}});
  ASSERT_EQ(run("sweep", single, dir / "s"), 0) << err.str();
  const auto simulate = config("m.json", {{"task", task(1, 5)}, {"simulate", sim}});
  ASSERT_EQ(run("simulate", simulate, dir / "m"), 0) << err.str();
  const std::string csv = shuttle::io::read_file(dir / "s" / "sweep.csv");
  const double excess = read(dir / "m" / "report.json").at("final_excess_energy").get<double>();
  EXPECT_EQ(csv, "t_f,mean_excess,stderr,n\n5," + shuttle::io::format_number(excess) + ",0,1\n");

  const auto multi = config("r.json", {{"task", task()}, {"sweep", {{"durations", {3.0, 4.0, 5.0}}}}});
  ASSERT_EQ(run("sweep", multi, dir / "r"), 0);
  const std::string full = shuttle::io::read_file(dir / "r" / "sweep.csv");
  json manifest = read(dir / "r" / "sweep.manifest.json");
  manifest["rows"].erase("1");
  manifest["rows"]["2"] = "5,123,0,1";  // a finished row is trusted, not recomputed
  shuttle::io::write_json(dir / "r" / "sweep.manifest.json", manifest);
  ASSERT_EQ(run("sweep", multi, dir / "r"), 0);
  const std::string resumed = shuttle::io::read_file(dir / "r" / "sweep.csv");
  EXPECT_NE(resumed, full);
  EXPECT_NE(resumed.find("5,123,0,1"), std::string::npos);
  EXPECT_EQ(resumed.substr(0, resumed.find("5,123")), full.substr(0, full.find("\n5,") + 1));
}

}  // namespace
