#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spheresync/analysis.hpp"
#include "spheresync/config.hpp"
#include "spheresync/trace_io.hpp"

namespace spheresync::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

struct RunOptions {
  std::string config_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool quiet = false;
};

struct SweepOptions {
  RunOptions base;
  /// "A:B" (inclusive) or a single seed; empty keeps the config seed.
  std::string seeds;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

struct RunOutcome {
  int exit_code = kExitOk;
  CertificateReport report;
  std::string error;
};

/// Simulates and certifies one scenario; writes trace and report under out_dir when requested.
RunOutcome run_scenario(const config::ScenarioConfig& cfg, const std::filesystem::path& out_dir, bool write_files,
                        const ReportEntries& extra_report_entries = {});

int cmd_simulate(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate_signal(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_reproduce(const std::string& preset, const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Command-line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace spheresync::cli
