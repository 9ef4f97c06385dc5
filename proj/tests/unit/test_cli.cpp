#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dnls/config.hpp"
#include "dnls/run.hpp"

using namespace dnls;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dnls_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(DNLS_RUN_BINARY) + " -q " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Fast variant of a scenario: same resolution class, shorter horizon.
RunConfig small(Scenario s) {
  RunConfig cfg = defaults_for(s);
  cfg.snapshots = std::min<std::size_t>(cfg.snapshots, 4);
  switch (s) {
    case Scenario::critical_defocusing:
    case Scenario::subcritical_conformal:
      cfg.n = 512;
      cfg.half_width = 50.0;
      cfg.t_end = 16.0;
      cfg.steps = 1000;
      cfg.cadence = 50;
      break;
    case Scenario::subcritical_direct:
      cfg.n = 256;
      cfg.half_width = 50.0;
      cfg.t_end = 2.0;
      cfg.steps = 400;
      cfg.cadence = 40;
      break;
    case Scenario::gp:
      cfg.n = 256;
      cfg.t_end = 1.0;
      cfg.steps = 1000;
      cfg.cadence = 100;
      break;
    case Scenario::plane_wave:
      cfg.n = 128;
      cfg.steps = 200;
      cfg.cadence = 20;
      break;
    case Scenario::filament_corner:
      break;
  }
  return cfg;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("key-value parsing") {
    const auto kv = parse_key_values("# comment\n\nscenario = gp\n  n=256   # trailing\nalpha = 2\n");
    CHECK(kv.at("scenario").value == "gp");
    CHECK(kv.at("n").value == "256");
    CHECK(kv.at("n").line == 4);
    CHECK(kv.size() == 3);
  }

  TEST_CASE("unknown keys, malformed lines and duplicates are rejected with line numbers") {
    try {
      parse_key_values("n = 64\nbogus = 1\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_key_values("n 64\n"), ConfigError);
    try {
      parse_key_values("n = 64\nalpha = 1\nn = 128\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      CHECK(what.find("line 1") != std::string::npos);
      CHECK(what.find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("scenario defaults") {
    const RunConfig crit = parse_config("");
    CHECK(crit.scenario == Scenario::critical_defocusing);
    CHECK(crit.n == 2048);
    CHECK(crit.alpha == 2.0);
    CHECK(crit.mesh == MeshRule::logarithmic);
    const RunConfig sub = parse_config("scenario = subcritical-conformal\n");
    CHECK(sub.alpha == 1.0);
    const RunConfig gp = parse_config("scenario = gp\n");
    CHECK(gp.t_start == 0.0);
    CHECK(gp.mesh == MeshRule::uniform);
    for (Scenario s : {Scenario::critical_defocusing, Scenario::subcritical_conformal, Scenario::subcritical_direct,
                       Scenario::gp, Scenario::filament_corner, Scenario::plane_wave}) {
      CHECK(scenario_from_name(scenario_name(s)) == s);
      CHECK_NOTHROW(defaults_for(s).validate());
    }
    CHECK_THROWS_AS(scenario_from_name("nope"), ConfigError);
  }

  TEST_CASE("invalid combinations are config errors") {
    CHECK_THROWS_AS(parse_config("scenario = subcritical-conformal\nalpha = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = critical-defocusing\nsign = focusing\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("n = 100\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("n = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("steps = -5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("snapshots = 65\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = gp\nsign = focusing\n"), ConfigError);
  }

  TEST_CASE("overrides replace file values and select the scenario") {
    KeyValues ov;
    ov["n"] = {"512", 0};
    ov["scenario"] = {"gp", 0};
    const RunConfig cfg = parse_config("n = 256\n", ov);
    CHECK(cfg.n == 512);
    CHECK(cfg.scenario == Scenario::gp);
  }

  TEST_CASE("resolved config round-trips through key-value text") {
    RunConfig cfg = defaults_for(Scenario::subcritical_direct);
    cfg.amp = 0.1234567890123;
    cfg.seed = 42;
    std::string text;
    for (const auto& [k, v] : config_to_key_values(cfg)) text += k + " = " + v + "\n";
    const RunConfig back = parse_config(text);
    CHECK(config_to_key_values(back) == config_to_key_values(cfg));
  }

  TEST_CASE("every scenario passes its checks on small runs") {
    for (Scenario s : {Scenario::critical_defocusing, Scenario::subcritical_conformal, Scenario::subcritical_direct,
                       Scenario::gp, Scenario::plane_wave, Scenario::filament_corner}) {
      CAPTURE(scenario_name(s));
      RunConfig cfg = small(s);
      const RunManifest m = run_scenario(cfg);
      for (const auto& c : m.checks) {
        CAPTURE(c.name);
        CAPTURE(c.value);
        CHECK(c.passed);
      }
      CHECK(m.exit_code() == kExitOk);
    }
  }

  TEST_CASE("zero profile passes with zero perturbation") {
    RunConfig cfg = small(Scenario::critical_defocusing);
    cfg.profile = Profile::zero;
    const RunManifest m = run_scenario(cfg);
    CHECK(m.all_passed());
    for (const auto& [name, value] : m.terminal)
      if (name == "mass" || name == "grad_l2") CHECK(value == 0.0);
  }

  TEST_CASE("outputs are written and bit-identical across runs") {
    // Same output directory both times: the manifest records it.
    const fs::path a = scratch("a"), b = scratch("b");
    RunConfig cfg = small(Scenario::critical_defocusing);
    cfg.out = a.string();
    run_scenario(cfg);
    fs::copy(a, b, fs::copy_options::recursive);
    fs::remove_all(a);
    run_scenario(cfg);
    for (const char* f : {"diagnostics.csv", "manifest.json", "snapshots"}) {
      CAPTURE(f);
      REQUIRE(fs::exists(a / f));
    }
    CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    for (const auto& e : fs::directory_iterator(a / "snapshots"))
      CHECK(slurp(e.path()) == slurp(b / "snapshots" / e.path().filename()));
    CHECK(fs::exists(a / "timing.json"));
    CHECK(fs::exists(a / "snapshots"));
    const std::string csv = slurp(a / "diagnostics.csv");
    CHECK(csv.rfind(kCsvHeader, 0) == 0);
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("json format") {
    const fs::path dir = scratch("json");
    RunConfig cfg = small(Scenario::gp);
    cfg.out = dir.string();
    cfg.format = OutputFormat::json;
    run_scenario(cfg);
    CHECK(fs::exists(dir / "diagnostics.json"));
    CHECK_FALSE(fs::exists(dir / "diagnostics.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("filament scenario writes curves") {
    const fs::path dir = scratch("curves");
    RunConfig cfg = defaults_for(Scenario::filament_corner);
    cfg.out = dir.string();
    CHECK(run_scenario(cfg).all_passed());
    CHECK_FALSE(fs::is_empty(dir / "curves"));
    fs::remove_all(dir);
  }

  TEST_CASE("unwritable output is an i/o error") {
    RunConfig cfg = small(Scenario::plane_wave);
    cfg.out = "/proc/dnls-cannot-write-here";
    CHECK_THROWS_AS(run_scenario(cfg), IoError);
  }

  TEST_CASE("binary exit codes") {
    const fs::path dir = scratch("bin");
    fs::create_directories(dir);
    CHECK(run_binary("--scenario plane-wave --n 128 --steps 100") == kExitOk);
    CHECK(run_binary("--scenario no-such-scenario") == kExitConfig);
    CHECK(run_binary("--scenario subcritical-conformal --alpha 2") == kExitConfig);
    CHECK(run_binary("--config /nonexistent/file.cfg") == kExitIo);

    std::ofstream(dir / "dup.cfg") << "n = 128\nn = 256\n";
    CHECK(run_binary("--config " + (dir / "dup.cfg").string()) == kExitConfig);

    // Advancing with the wrong nonlinear sign must be caught by the monitors.
    std::ofstream(dir / "fault.cfg") << "scenario = critical-defocusing\nn = 256\nhalf_width = 40\nt_end = 50\n"
                                        "steps = 2000\namp = 0.6\nfault.flip_nonlinear_sign = true\n";
    CHECK(run_binary("--config " + (dir / "fault.cfg").string()) == kExitCheckFailed);
    fs::remove_all(dir);
  }
}
