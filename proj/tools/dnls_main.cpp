// Command-line driver: dnls_run --scenario <name> [--config file] [flags] --out <dir>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dnls/config.hpp"
#include "dnls/run.hpp"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--scenario", "scenario", "critical-defocusing | subcritical-conformal | subcritical-direct | gp | filament-corner | plane-wave"},
    {"--n", "n", "grid points (power of two)"},
    {"--half-width", "half_width", "half length L of the periodic interval [-L, L)"},
    {"--t-start", "t_start", "initial time"},
    {"--t-end", "t_end", "final time"},
    {"--steps", "steps", "number of time steps"},
    {"--alpha", "alpha", "nonlinearity power"},
    {"--a-mod", "a_mod", "modulus of the Dirac amplitude a"},
    {"--a-arg", "a_arg", "argument of a (radians)"},
    {"--sign", "sign", "focusing | defocusing"},
    {"--profile", "profile", "gaussian | mode | zero"},
    {"--amp", "amp", "initial-data amplitude"},
    {"--width", "width", "initial-data width"},
    {"--seed", "seed", "seed for randomized profiles (0 = deterministic Gaussian)"},
    {"--out", "out", "output directory"},
    {"--format", "format", "csv | json"},
    {"--snapshots", "snapshots", "number of stored snapshots (<= 64)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step solver and diagnostics for Schrödinger equations with Dirac-like data"};
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  std::vector<std::string> values(std::size(kFlags));
  for (std::size_t i = 0; i < std::size(kFlags); ++i) app.add_option(kFlags[i].name, values[i], kFlags[i].help);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "only print failures");
  app.set_version_flag("--version", DNLS_VERSION);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dnls::kExitConfig;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return dnls::kExitIo;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  dnls::KeyValues overrides;
  for (std::size_t i = 0; i < std::size(kFlags); ++i)
    if (app.count(kFlags[i].name) > 0) overrides[kFlags[i].key] = {values[i], 0};

  dnls::RunConfig cfg;
  try {
    cfg = dnls::parse_config(text, overrides);
  } catch (const dnls::ConfigError& e) {
    std::cerr << "config error: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << "\n";
    return dnls::kExitConfig;
  }

  dnls::RunManifest manifest;
  try {
    manifest = dnls::run_scenario(cfg);
  } catch (const dnls::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return dnls::kExitIo;
  } catch (const dnls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dnls::kExitConfig;
  }

  for (const auto& c : manifest.checks) {
    if (quiet && c.passed) continue;
    std::printf("%-4s %-28s value=%.6g bound=%.6g\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.value, c.bound);
  }
  if (manifest.blowup) std::printf("blow-up detected\n");
  return manifest.exit_code();
}
