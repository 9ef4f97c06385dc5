#pragma once
// Scenario driver: builds the initial data, integrates (or runs the
// filament pipeline), evaluates the scenario's mandatory checks and writes
// the output directory.
//
// Output layout under RunConfig::out:
//   diagnostics.csv | diagnostics.json   one row per record
//   manifest.json                        resolved config, version, terminal values, checks
//   timing.json                          wall time (kept out of the manifest so it is reproducible)
//   snapshots/step_<k>.csv               x,re,im at up to 64 geometric times
//   curves/*.txt                         filament point lists (x y z per line)

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dnls/config.hpp"
#include "dnls/functionals.hpp"
#include "dnls/grid.hpp"

namespace dnls {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitBlowup = 2,
  kExitIo = 3,
  kExitConfig = 4,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
};

struct RunManifest {
  RunConfig config;
  std::string version;
  std::vector<std::pair<std::string, double>> terminal;
  std::vector<CheckResult> checks;
  bool blowup = false;
  double wall_seconds = 0.0;

  bool all_passed() const;
  int exit_code() const;
  /// Deterministic JSON (no wall time).
  std::string to_json() const;
};

/// Initial perturbation for a config on a grid at time t_start.
FieldState initial_state(const RunConfig& cfg, const SpatialGrid& grid);

/// Mesh steps for at most `count` snapshots at geometrically spaced times.
std::vector<std::size_t> geometric_snapshot_steps(const TimeMesh& mesh, std::size_t count);

/// CSV header shared by all scenarios.
inline constexpr const char* kCsvHeader =
    "step,t,mass,grad_l2,potential_l2,energy,cum_dissipation,energy_residual,mass_residual,"
    "boundary_contamination";

/// One CSV row (no trailing newline), round-trip precision.
std::string csv_row(const DiagnosticsRecord& r);

/// Runs a validated config. Writes outputs when cfg.out is non-empty and
/// throws IoError when they cannot be written.
RunManifest run_scenario(const RunConfig& cfg);

}  // namespace dnls
