#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spheresync/dynamics.hpp"

namespace spheresync::config {

/// Parse or validation failure tied to a config line (0 when the line is
/// unknown, e.g. a missing key or a command-line override).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message);

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct IniEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/// Flat `[section]` / `key = value` document; `#` starts a comment.
struct IniDocument {
  std::vector<IniEntry> entries;
  std::vector<std::pair<std::string, int>> sections;  // name, header line
};

IniDocument parse_ini(std::string_view text);

/// "section.key=value": replaces every entry of section.key with the value.
void apply_override(IniDocument& doc, std::string_view assignment);

struct OutputSettings {
  std::string trace_path = "trace.csv";
  std::string report_path = "report.txt";
  std::size_t stride = 1;

  friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

struct ScenarioConfig {
  Scenario scenario;
  OutputSettings output;
};

/// Materializes generators (signal, initial states) from the scenario seed.
ScenarioConfig build_scenario(const IniDocument& doc, std::optional<std::uint64_t> seed_override = std::nullopt);

ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                            std::optional<std::uint64_t> seed_override = std::nullopt);

/// Reads the file; IO failures surface as ConfigError with line 0.
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {},
                           std::optional<std::uint64_t> seed_override = std::nullopt);

/// Fully explicit config text (no generators) that parses back to an equal scenario.
std::string echo_config(const ScenarioConfig& cfg);

/// Independent 64-bit stream derived from a scenario seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace spheresync::config
