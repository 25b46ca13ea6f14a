#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "spheresync/cli.hpp"
#include "spheresync/config.hpp"
#include "spheresync/presets.hpp"
#include "spheresync/trace_io.hpp"

using namespace spheresync;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"(# two triangles on S^2
[scenario]
mode = generic_sn
sphere_dim = 2
n_agents = 3
dt = 0.001
horizon = 20
seed = 4

[shaping]
kind = chordal

[graphs]
graph = 0-1 1-2
graph = 0-1:2 0-2

[signal]
switch = 0 0
switch = 0.5 1
switch = 1.25 0
dwell = fixed
tau_d = 0.5

[init]
state = 1 0 0
state = 0.8 0.6 0
state = 0.8 0 0.6

[output]
stride = 100
)";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spheresync_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.ini";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::map<std::string, std::string> read_report(const fs::path& p) {
  std::map<std::string, std::string> kv;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

int config_error_line(const std::string& text) {
  try {
    config::parse_config(text);
  } catch (const config::ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config parses the documented schema") {
  const auto cfg = config::parse_config(kBase);
  const Scenario& sc = cfg.scenario;
  CHECK(sc.n_agents == 3);
  CHECK(sc.graphs.size() == 2);
  CHECK(sc.graphs[1].edges()[0].weight == 2.0);
  CHECK(sc.signal.switch_times() == std::vector<double>{0.0, 0.5, 1.25});
  REQUIRE(sc.dwell);
  CHECK(sc.dwell->tau_d == 0.5);
  CHECK(cfg.output.stride == 100);
  CHECK(cfg.output.trace_path == "trace.csv");
}

TEST_CASE("config errors name the line and field") {
  CHECK(config_error_line(replace(kBase, "dt = 0.001", "dt = 0")) == 6);
  CHECK(config_error_line(replace(kBase, "seed = 4", "seeed = 4")) == 8);
  CHECK(config_error_line(replace(kBase, "[output]", "[outputs]")) == 29);
  CHECK(config_error_line(replace(kBase, "state = 0.8 0 0.6", "state = 0.8 0")) == 27);
  CHECK(config_error_line(replace(kBase, "kind = chordal", "kind = chordal\nkind = chordal")) == 12);
  try {
    config::parse_config(replace(kBase, "dt = 0.001", "dt = 0"));
    FAIL("expected a config error");
  } catch (const config::ConfigError& e) {
    CHECK(e.field() == "scenario.dt");
    CHECK(std::string(e.what()).find("scenario.dt") != std::string::npos);
  }
  CHECK_THROWS_AS(config::parse_config(kBase, {"scenario.nope=1"}), config::ConfigError);
  CHECK_THROWS_AS(config::load_config("/nonexistent/spheresync.ini"), config::ConfigError);
}

TEST_CASE("overrides and seed") {
  const auto cfg = config::parse_config(kBase, {"scenario.horizon=5", "signal.tau_d=0.25"}, 99);
  CHECK(cfg.scenario.horizon == 5.0);
  CHECK(cfg.scenario.dwell->tau_d == 0.25);
  CHECK(cfg.scenario.seed == 99);
}

TEST_CASE("echoed config re-parses to an equal scenario") {
  std::vector<config::ScenarioConfig> cases{config::parse_config(kBase)};
  for (const auto& name : preset_names()) cases.push_back(make_preset(name, 17));
  const std::string generated = replace(replace(kBase,
                                                "switch = 0 0\nswitch = 0.5 1\nswitch = 1.25 0\n",
                                                "source = generated\n"),
                                        "state = 1 0 0\nstate = 0.8 0.6 0\nstate = 0.8 0 0.6\n",
                                        "source = cap\nradius = 0.5\n");
  cases.push_back(config::parse_config(generated));
  for (const auto& cfg : cases) {
    const std::string text = config::echo_config(cfg);
    const auto again = config::parse_config(text);
    CHECK(scenario_equal(cfg.scenario, again.scenario));
    CHECK(cfg.output == again.output);
    CHECK(config::echo_config(again) == text);
  }
}

TEST_CASE("generated inputs depend only on the seed") {
  const std::string generated = replace(kBase, "switch = 0 0\nswitch = 0.5 1\nswitch = 1.25 0\n", "source = generated\n");
  const auto a = config::parse_config(generated, {}, 8);
  const auto b = config::parse_config(generated, {}, 8);
  const auto c = config::parse_config(generated, {}, 9);
  CHECK(a.scenario.signal == b.scenario.signal);
  CHECK_FALSE(a.scenario.signal == c.scenario.signal);
}

TEST_CASE("trace csv format") {
  const auto cfg = config::parse_config(kBase, {"scenario.horizon=0.01"});
  const Trace tr = simulate(cfg.scenario);
  std::ostringstream out;
  write_trace_csv(out, tr, 1);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "time,graph_index,lyapunov,sync_error,x_0_0,x_0_1,x_0_2,x_1_0,x_1_1,x_1_2,x_2_0,x_2_1,x_2_2");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    CHECK(std::count(row.begin(), row.end(), ',') == 12);
  }
  CHECK(rows == tr.samples.size());
  CHECK(format_real(0.1) == "0.10000000000000001");

  std::ostringstream strided;
  write_trace_csv(strided, tr, 4);
  const std::string text = strided.str();
  const auto lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == 1 + 3 + 1);  // header, samples 0 4 8, last sample
}

TEST_CASE("simulate command writes trace and report") {
  const fs::path dir = scratch("simulate");
  const fs::path cfg = write_config(dir, kBase);
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.config_path = cfg.string();
  opts.out_dir = dir / "out";
  CHECK(cli::cmd_simulate(opts, out, err) == 0);
  CHECK(fs::exists(dir / "out" / "trace.csv"));
  const auto report = read_report(dir / "out" / "report.txt");
  CHECK(report.at("verdict") == "theorem_consistent");
  CHECK(report.at("hypotheses.graph.1.connected") == "true");
  CHECK(report.at("conclusion.monotonicity_violations") == "0");

  // Re-running gives byte-identical files.
  const std::string first = slurp(dir / "out" / "trace.csv");
  CHECK(cli::cmd_simulate(opts, out, err) == 0);
  CHECK(slurp(dir / "out" / "trace.csv") == first);
}

TEST_CASE("simulate command exit codes") {
  const fs::path dir = scratch("exit_codes");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.out_dir = dir;

  opts.config_path = write_config(dir, replace(kBase, "dt = 0.001", "dt = 0")).string();
  CHECK(cli::cmd_simulate(opts, out, err) == 1);
  CHECK(err.str().find("scenario.dt") != std::string::npos);

  opts.config_path = write_config(dir, replace(kBase, "switch = 0.5 1", "switch = 0.1 1")).string();
  err.str("");
  CHECK(cli::cmd_simulate(opts, out, err) == 1);
  CHECK(err.str().find("dwell") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "trace.csv"));

  opts.config_path = (dir / "missing.ini").string();
  CHECK(cli::cmd_simulate(opts, out, err) == 1);

  // Uncertified hypotheses and no synchronization: neutral.
  opts.config_path = write_config(dir, replace(kBase, "graph = 0-1:2 0-2", "graph = 0-1")).string();
  opts.overrides = {"scenario.horizon=2"};
  CHECK(cli::cmd_simulate(opts, out, err) == 0);
  CHECK(read_report(dir / "report.txt").at("verdict") == "hypotheses_not_certified");

  // Certified hypotheses with an unreachable epsilon is a violation.
  opts.config_path = write_config(dir, kBase).string();
  opts.overrides = {"scenario.horizon=0.5", "scenario.epsilon=1e-300"};
  CHECK(cli::cmd_simulate(opts, out, err) == 2);
}

TEST_CASE("validate-signal command") {
  const fs::path dir = scratch("validate");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.config_path = write_config(dir, kBase).string();
  CHECK(cli::cmd_validate_signal(opts, out, err) == 0);

  out.str("");
  opts.config_path = write_config(dir, replace(kBase, "switch = 0.5 1", "switch = 0.1 1")).string();
  CHECK(cli::cmd_validate_signal(opts, out, err) != 0);
  CHECK(out.str().find("worst_pair: 0 0.10000000000000001") != std::string::npos);

  const std::string generated = replace(kBase, "switch = 0 0\nswitch = 0.5 1\nswitch = 1.25 0\n", "source = generated\n");
  opts.config_path = write_config(dir, generated).string();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    opts.seed = seed;
    CHECK(cli::cmd_validate_signal(opts, out, err) == 0);
  }
}

TEST_CASE("sweep command") {
  const fs::path dir = scratch("sweep");
  const std::string generated = replace(kBase, "switch = 0 0\nswitch = 0.5 1\nswitch = 1.25 0\n", "source = generated\n");
  std::ostringstream out, err;
  cli::SweepOptions opts;
  opts.base.config_path = write_config(dir, generated).string();
  opts.base.out_dir = dir;
  opts.base.overrides = {"signal.tau_d=0.01,0.1,1.0"};
  CHECK(cli::cmd_sweep(opts, out, err) == 0);
  const std::string table = slurp(dir / "sweep.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
  CHECK(std::count(table.begin(), table.end(), ',') > 0);
  std::istringstream rows(table);
  std::string row;
  std::getline(rows, row);
  while (std::getline(rows, row)) CHECK(row.find("theorem_consistent") != std::string::npos);

  // Execution order does not change the table.
  opts.base.overrides = {};
  opts.seeds = "1:10";
  opts.jobs = 1;
  CHECK(cli::cmd_sweep(opts, out, err) == 0);
  const std::string serial = slurp(dir / "sweep.csv");
  opts.jobs = 4;
  CHECK(cli::cmd_sweep(opts, out, err) == 0);
  CHECK(slurp(dir / "sweep.csv") == serial);
  CHECK(std::count(serial.begin(), serial.end(), '\n') == 11);

  // One row without overrides matches the simulate verdict.
  opts.seeds = "";
  opts.base.seed = 3;
  CHECK(cli::cmd_sweep(opts, out, err) == 0);
  cli::RunOptions single = opts.base;
  single.out_dir = dir / "single";
  CHECK(cli::cmd_simulate(single, out, err) == 0);
  const auto report = read_report(dir / "single" / "report.txt");
  const std::string one = slurp(dir / "sweep.csv");
  CHECK(one.find(report.at("conclusion.final_sync_error")) != std::string::npos);

  // A failing child is recorded and sets the exit code.
  opts.base.overrides = {"scenario.dt=0.001,0"};
  CHECK(cli::cmd_sweep(opts, out, err) == 1);
  CHECK(slurp(dir / "sweep.csv").find("scenario.dt") != std::string::npos);

  opts.seeds = "5:2";
  CHECK(cli::cmd_sweep(opts, out, err) == 1);
}

TEST_CASE("reproduce command") {
  const fs::path dir = scratch("reproduce");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.out_dir = dir / "bogus";
  CHECK(cli::cmd_reproduce("bogus", opts, out, err) == 1);
  for (const auto& name : preset_names()) CHECK(err.str().find(name) != std::string::npos);

  opts.out_dir = dir / "rn";
  opts.overrides = {"scenario.horizon=30"};
  CHECK(cli::cmd_reproduce("rn-consensus", opts, out, err) == 0);
  for (const char* f : {"config.ini", "trace.csv", "report.txt", "signal.csv"}) CHECK(fs::exists(dir / "rn" / f));
  const auto report = read_report(dir / "rn" / "report.txt");
  CHECK(report.at("consensus.agree") == "true");
  CHECK(report.at("verdict") == "theorem_consistent");

  // The written config reproduces the same trace through simulate.
  cli::RunOptions again;
  again.config_path = (dir / "rn" / "config.ini").string();
  again.out_dir = dir / "rn2";
  CHECK(cli::cmd_simulate(again, out, err) == 0);
  CHECK(slurp(dir / "rn2" / "trace.csv") == slurp(dir / "rn" / "trace.csv"));
}
