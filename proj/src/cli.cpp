#include "spheresync/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "spheresync/presets.hpp"
#include "spheresync/trace_io.hpp"

namespace spheresync::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

fs::path resolve(const fs::path& out_dir, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : out_dir / p;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void print_summary(std::ostream& out, const CertificateReport& r) {
  out << "verdict: " << to_string(r.verdict) << "\n"
      << "  hypotheses certified: " << (r.hypotheses_certified ? "yes" : "no") << "\n"
      << "  final sync error: " << format_real(r.final_sync_error) << " (epsilon " << format_real(r.epsilon) << ")\n"
      << "  time to epsilon: " << (r.time_to_epsilon ? format_real(*r.time_to_epsilon) : "undefined") << "\n"
      << "  monotonicity violations: " << r.monotonicity_violations << "\n";
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto parse = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
    return v;
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {parse(text)};
  const std::uint64_t lo = parse(text.substr(0, colon));
  const std::uint64_t hi = parse(text.substr(colon + 1));
  if (hi < lo) throw std::invalid_argument("seed range '" + text + "' is empty");
  if (hi - lo > 1000000) throw std::invalid_argument("seed range '" + text + "' is too large");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  return seeds;
}

// Cross product of "key=a,b,c" alternatives, in the order given.
std::vector<std::vector<std::string>> expand_overrides(const std::vector<std::string>& overrides) {
  std::vector<std::vector<std::string>> combos{{}};
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw config::ConfigError(0, o, "override must look like section.key=value");
    const std::string key = o.substr(0, eq);
    std::vector<std::string> values;
    std::stringstream ss(o.substr(eq + 1));
    std::string v;
    while (std::getline(ss, v, ',')) values.push_back(v);
    if (values.empty()) values.emplace_back();
    std::vector<std::vector<std::string>> next;
    for (const auto& c : combos) {
      for (const auto& val : values) {
        auto extended = c;
        extended.push_back(key + "=" + val);
        next.push_back(std::move(extended));
      }
    }
    combos = std::move(next);
  }
  return combos;
}

}  // namespace

RunOutcome run_scenario(const config::ScenarioConfig& cfg, const fs::path& out_dir, bool write_files,
                        const ReportEntries& extra_report_entries) {
  RunOutcome outcome;
  const Trace trace = simulate(cfg.scenario);
  outcome.report = certify(trace, cfg.scenario, cfg.scenario.epsilon);
  outcome.exit_code = outcome.report.verdict == Verdict::kViolation ? kExitViolation : kExitOk;
  if (write_files) {
    std::ostringstream csv;
    write_trace_csv(csv, trace, cfg.output.stride);
    write_file(resolve(out_dir, cfg.output.trace_path), csv.str());

    ReportEntries entries = report_entries(outcome.report, cfg.scenario, trace);
    entries.insert(entries.end() - 1, extra_report_entries.begin(), extra_report_entries.end());
    std::ostringstream rep;
    write_report(rep, entries);
    write_file(resolve(out_dir, cfg.output.report_path), rep.str());
  }
  return outcome;
}

int cmd_simulate(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const config::ScenarioConfig cfg = config::load_config(opts.config_path, opts.overrides, opts.seed);
    const RunOutcome outcome = run_scenario(cfg, opts.out_dir, true);
    if (!opts.quiet) {
      print_summary(out, outcome.report);
      out << "  trace: " << resolve(opts.out_dir, cfg.output.trace_path).string() << "\n"
          << "  report: " << resolve(opts.out_dir, cfg.output.report_path).string() << "\n";
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_validate_signal(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const config::ScenarioConfig cfg = config::load_config(opts.config_path, opts.overrides, opts.seed);
    const Scenario& sc = cfg.scenario;
    const auto& times = sc.signal.switch_times();
    out << "switches: " << count_switches(sc.signal, sc.signal.start_time(), sc.horizon) << " on ("
        << format_real(sc.signal.start_time()) << ", " << format_real(sc.horizon) << "]\n";
    if (!sc.dwell) {
      double min_gap = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < times.size() && times[k] <= sc.horizon; ++k) min_gap = std::min(min_gap, times[k] - times[k - 1]);
      out << "dwell: none declared\nmin_gap: " << format_real(min_gap) << "\nok: true\n";
      return kExitOk;
    }
    const DwellReport rep = validate_dwell(sc.signal, *sc.dwell, sc.horizon);
    if (sc.dwell->mode == DwellTimeSpec::Mode::kFixedDwell) {
      out << "dwell: fixed tau_d=" << format_real(sc.dwell->tau_d) << "\n";
    } else {
      out << "dwell: average N0=" << format_real(sc.dwell->n0) << " tau_a=" << format_real(sc.dwell->tau_a) << "\n";
    }
    out << "worst_pair: " << format_real(rep.worst_pair.first) << " " << format_real(rep.worst_pair.second) << "\n"
        << "margin: " << format_real(rep.margin) << "\n"
        << "ok: " << (rep.ok ? "true" : "false") << "\n";
    return rep.ok ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<std::vector<std::string>> combos;
  std::vector<std::optional<std::uint64_t>> seeds;
  try {
    combos = expand_overrides(opts.base.overrides);
    if (opts.seeds.empty()) {
      seeds.push_back(opts.base.seed);
    } else {
      for (std::uint64_t s : parse_seed_range(opts.seeds)) seeds.emplace_back(s);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  struct Row {
    std::size_t combo = 0;
    std::optional<std::uint64_t> seed;
    int exit_code = kExitOk;
    std::optional<CertificateReport> report;
    std::string error;
  };
  std::vector<Row> rows;
  for (std::size_t c = 0; c < combos.size(); ++c) {
    for (const auto& s : seeds) rows.push_back({c, s, kExitOk, std::nullopt, {}});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      Row& row = rows[k];
      try {
        const config::ScenarioConfig cfg = config::load_config(opts.base.config_path, combos[row.combo], row.seed);
        const RunOutcome outcome = run_scenario(cfg, opts.base.out_dir, false);
        row.exit_code = outcome.exit_code;
        row.report = outcome.report;
      } catch (const std::exception& e) {
        row.exit_code = kExitUsage;
        row.error = e.what();
      }
    }
  };
  const std::size_t jobs =
      std::max<std::size_t>(1, std::min<std::size_t>(rows.size(), opts.jobs ? opts.jobs : std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream table;
  table << "row,overrides,seed,exit_code,verdict,final_sync_error,time_to_epsilon,monotonicity_violations,error\n";
  int worst = kExitOk;
  std::size_t consistent = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& row = rows[k];
    std::string joined;
    for (const auto& o : combos[row.combo]) joined += (joined.empty() ? "" : ";") + o;
    table << k << ',' << csv_field(joined) << ',' << (row.seed ? std::to_string(*row.seed) : std::string("config")) << ','
          << row.exit_code << ',';
    if (row.report) {
      table << to_string(row.report->verdict) << ',' << format_real(row.report->final_sync_error) << ','
            << (row.report->time_to_epsilon ? format_real(*row.report->time_to_epsilon) : "undefined") << ','
            << row.report->monotonicity_violations << ',';
      if (row.report->verdict == Verdict::kTheoremConsistent) ++consistent;
    } else {
      table << "error,,,,";
    }
    table << csv_field(row.error) << '\n';
    worst = std::max(worst, row.exit_code);
  }

  try {
    write_file(opts.base.out_dir / "sweep.csv", table.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!opts.base.quiet) {
    out << "rows: " << rows.size() << "\ntheorem-consistent: " << consistent << "/" << rows.size() << "\n"
        << "table: " << (opts.base.out_dir / "sweep.csv").string() << "\n";
  }
  for (const Row& row : rows) {
    if (!row.error.empty()) err << "row error: " << row.error << "\n";
  }
  return worst;
}

int cmd_reproduce(const std::string& preset, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    config::ScenarioConfig cfg;
    try {
      cfg = make_preset(preset, opts.seed.value_or(1));
    } catch (const InputError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    // Round-trip through the echoed config so the written file is exactly what ran.
    const std::string text = config::echo_config(cfg);
    cfg = config::parse_config(text, opts.overrides);
    const std::string final_text = config::echo_config(cfg);
    write_file(opts.out_dir / "config.ini", final_text);

    std::ostringstream sig;
    write_signal_csv(sig, cfg.scenario.signal, cfg.scenario.horizon);
    write_file(opts.out_dir / "signal.csv", sig.str());

    ReportEntries extra;
    bool consensus_ok = true;
    if (cfg.scenario.mode == SimulationMode::kRnConsensusViaSn && cfg.scenario.graphs.size() == 1) {
      const ConsensusComparison cmp =
          consensus_oracle_compare(cfg.scenario.consensus_points, cfg.scenario.graphs.front(),
                                   cfg.scenario.horizon - cfg.scenario.signal.start_time(), cfg.scenario.dt,
                                   cfg.scenario.consensus_scale);
      consensus_ok = cmp.linear_disagreement <= cfg.scenario.epsilon && cmp.sphere_disagreement <= cfg.scenario.epsilon;
      extra.emplace_back("consensus.linear_disagreement", format_real(cmp.linear_disagreement));
      extra.emplace_back("consensus.sphere_disagreement", format_real(cmp.sphere_disagreement));
      extra.emplace_back("consensus.max_deviation", format_real(cmp.max_deviation));
      extra.emplace_back("consensus.agree", consensus_ok ? "true" : "false");
    }

    RunOutcome outcome = run_scenario(cfg, opts.out_dir, true, extra);
    if (!consensus_ok && outcome.report.hypotheses_certified) outcome.exit_code = kExitViolation;
    if (!opts.quiet) {
      out << "preset: " << preset << "\n";
      print_summary(out, outcome.report);
      out << "  output: " << opts.out_dir.string() << "\n";
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Synchronization of unit vectors on spheres under switching topologies"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string seeds;
  std::string preset;
  std::size_t jobs = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config_path, "Scenario config file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--set", opts.overrides, "Override a config value (section.key=value), repeatable");
    sub->add_flag("--quiet", opts.quiet, "Suppress the summary");
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "Run one scenario and write trace + report");
  add_common(simulate_cmd, true);
  auto* validate_cmd = app.add_subcommand("validate-signal", "Check the switching signal against its dwell spec");
  add_common(validate_cmd, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run override x seed combinations and tabulate");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--seeds", seeds, "Seed or inclusive range A:B");
  sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run a built-in preset");
  add_common(reproduce_cmd, false);
  reproduce_cmd->add_option("preset", preset, "Preset name (so3-complete, s2-pointing, rn-consensus)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  opts.out_dir = out_dir;
  auto* active = app.get_subcommands().front();
  if (active->count("--seed") > 0) opts.seed = seed;

  if (active == simulate_cmd) return cmd_simulate(opts, std::cout, std::cerr);
  if (active == validate_cmd) return cmd_validate_signal(opts, std::cout, std::cerr);
  if (active == sweep_cmd) return cmd_sweep({opts, seeds, jobs}, std::cout, std::cerr);
  return cmd_reproduce(preset, opts, std::cout, std::cerr);
}

}  // namespace spheresync::cli
