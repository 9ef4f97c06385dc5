#pragma once
// Run configuration: a line-oriented `key = value` format with `#`
// comments. Unknown and duplicate keys are errors; values given as
// overrides (command-line flags) replace file values.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dnls/equation.hpp"
#include "dnls/filament.hpp"

namespace dnls {

enum class Scenario {
  critical_defocusing,
  subcritical_conformal,
  subcritical_direct,
  gp,
  filament_corner,
  plane_wave,
};

std::string_view scenario_name(Scenario s);
/// Throws ConfigError for unknown names.
Scenario scenario_from_name(std::string_view name);

enum class Profile { gaussian, mode, zero };
enum class OutputFormat { csv, json };

/// Parse or validation failure; line is 0 when not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct RunConfig {
  Scenario scenario = Scenario::critical_defocusing;
  // grid
  std::size_t n = 2048;
  double half_width = 200.0;
  // time mesh
  double t_start = 1.0;
  double t_end = 1000.0;
  std::size_t steps = 10000;
  MeshRule mesh = MeshRule::logarithmic;
  // equation
  double a_mod = 1.0;
  double a_arg = 0.0;
  double alpha = 2.0;
  Sign sign = Sign::defocusing;
  /// 0 selects the family's own orientation.
  int sigma = 0;
  // initial data
  Profile profile = Profile::gaussian;
  double amp = 0.217;
  double width = 1.0;
  /// Wavenumber index of the `mode` profile (ξ = π·mode/L).
  int mode = 1;
  std::uint64_t seed = 0;
  // output
  std::string out;
  OutputFormat format = OutputFormat::csv;
  std::size_t snapshots = 16;
  std::size_t cadence = 10;
  // checks
  double energy_tolerance = 1e-4;
  /// Fault injection: advance with the opposite nonlinear sign while the
  /// monitors keep the declared one.
  bool fault_flip_nonlinear_sign = false;
  // filament-corner
  double c0 = 0.5;
  MetricSign metric = MetricSign::euclidean;
  double curve_h = 1e-3;
  double curve_half_width = 10.0;
  std::vector<double> curve_times{0.04, 0.02, 0.01};

  /// Throws ConfigError when the configuration cannot be run.
  void validate() const;
  EquationSpec equation() const;
  TimeMesh time_mesh() const;
};

/// Scenario defaults (see the README table).
RunConfig defaults_for(Scenario s);

/// Accepted keys, in manifest order.
const std::vector<std::string>& config_keys();

struct ConfigEntry {
  std::string value;
  std::size_t line = 0;  ///< 0 for overrides
};
using KeyValues = std::map<std::string, ConfigEntry>;

/// Tokenizes the file format. Throws ConfigError on malformed lines,
/// unknown keys and duplicates (naming both lines).
KeyValues parse_key_values(std::string_view text);

/// Resolves file entries plus overrides into a validated config. The
/// scenario comes from the overrides, else the file, else the default.
RunConfig build_config(const KeyValues& file, const KeyValues& overrides = {});

/// parse_key_values + build_config.
RunConfig parse_config(std::string_view text, const KeyValues& overrides = {});

/// Every key with its resolved value, formatted deterministically.
std::vector<std::pair<std::string, std::string>> config_to_key_values(const RunConfig& cfg);

}  // namespace dnls
