#include "dnls/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dnls {

namespace {

struct ScenarioName {
  Scenario s;
  std::string_view name;
};

constexpr ScenarioName kScenarios[] = {
    {Scenario::critical_defocusing, "critical-defocusing"},
    {Scenario::subcritical_conformal, "subcritical-conformal"},
    {Scenario::subcritical_direct, "subcritical-direct"},
    {Scenario::gp, "gp"},
    {Scenario::filament_corner, "filament-corner"},
    {Scenario::plane_wave, "plane-wave"},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view scenario_name(Scenario s) {
  for (const auto& e : kScenarios)
    if (e.s == s) return e.name;
  return "unknown";
}

Scenario scenario_from_name(std::string_view name) {
  for (const auto& e : kScenarios)
    if (e.name == name) return e.s;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "scenario", "n", "half_width", "t_start", "t_end", "steps", "mesh", "a_mod", "a_arg",
      "alpha", "sign", "sigma", "profile", "amp", "width", "mode", "seed", "out", "format",
      "snapshots", "cadence", "check.energy_tolerance", "fault.flip_nonlinear_sign",
      "filament.c0", "filament.metric", "filament.h", "filament.half_width", "filament.times"};
  return keys;
}

RunConfig defaults_for(Scenario s) {
  RunConfig c;
  c.scenario = s;
  switch (s) {
    case Scenario::critical_defocusing:
      break;
    case Scenario::subcritical_conformal:
      c.n = 1024;
      c.half_width = 400.0;
      c.t_end = 1024.0;
      c.steps = 10240;
      c.alpha = 1.0;
      c.amp = 0.2;
      c.width = 4.0;
      c.cadence = 64;
      break;
    case Scenario::subcritical_direct:
      c.n = 1024;
      c.half_width = 100.0;
      c.t_end = 10.0;
      c.steps = 4000;
      c.mesh = MeshRule::uniform;
      c.alpha = 1.0;
      c.amp = 0.1;
      c.width = 2.0;
      break;
    case Scenario::gp:
      c.n = 512;
      c.half_width = 50.0;
      c.t_start = 0.0;
      c.t_end = 10.0;
      c.steps = 10000;
      c.mesh = MeshRule::uniform;
      c.amp = 0.1;
      c.width = 2.0;
      c.cadence = 100;
      c.energy_tolerance = 1e-6;
      break;
    case Scenario::plane_wave:
      c.n = 512;
      c.half_width = 8.0 * 3.14159265358979323846;
      c.t_start = 0.0;
      c.t_end = 1.0;
      c.steps = 1000;
      c.mesh = MeshRule::uniform;
      c.a_mod = 0.0;
      c.profile = Profile::mode;
      c.amp = 1.0;
      c.mode = 3;
      c.cadence = 100;
      break;
    case Scenario::filament_corner:
      c.n = 0;
      c.half_width = 0.0;
      c.steps = 0;
      c.snapshots = 0;
      break;
  }
  return c;
}

void RunConfig::validate() const {
  if (scenario == Scenario::filament_corner) {
    if (!(c0 >= 0.0) || !std::isfinite(c0)) throw ConfigError("filament.c0 must be finite and >= 0");
    if (!(curve_h > 0.0) || !(curve_half_width > curve_h))
      throw ConfigError("filament.h must be positive and below filament.half_width");
    if (curve_times.size() < 2) throw ConfigError("filament.times needs at least two times");
    for (std::size_t i = 0; i < curve_times.size(); ++i)
      if (!(curve_times[i] > 0.0) || (i > 0 && !(curve_times[i] < curve_times[i - 1])))
        throw ConfigError("filament.times must be positive and decreasing");
    return;
  }
  if (n < 8 || (n & (n - 1)) != 0) throw ConfigError("n must be a power of two >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ConfigError("half_width must be positive");
  if (steps == 0) throw ConfigError("steps must be positive");
  if (cadence == 0) throw ConfigError("cadence must be positive");
  if (snapshots > 64) throw ConfigError("snapshots must be at most 64");
  if (!(width > 0.0) || !std::isfinite(width)) throw ConfigError("width must be positive");
  if (!std::isfinite(amp)) throw ConfigError("amp must be finite");
  if (!(energy_tolerance > 0.0)) throw ConfigError("check.energy_tolerance must be positive");
  if (!(a_mod >= 0.0) || !std::isfinite(a_mod) || !std::isfinite(a_arg))
    throw ConfigError("a_mod must be finite and >= 0");
  try {
    const EquationSpec spec = equation();
    if (sigma != 0 && sigma != spec.sigma)
      throw ConfigError("sigma = " + std::to_string(sigma) + " does not match scenario " +
                        std::string(scenario_name(scenario)));
    time_mesh().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

EquationSpec RunConfig::equation() const {
  const cplx a = std::polar(a_mod, a_arg);
  switch (scenario) {
    case Scenario::critical_defocusing:
      if (alpha != 2.0) throw std::invalid_argument("critical-defocusing requires alpha = 2");
      if (sign != Sign::defocusing) throw std::invalid_argument("critical-defocusing requires the defocusing sign");
      return EquationSpec::critical(a, sign, t_start);
    case Scenario::subcritical_conformal:
      return EquationSpec::conformal(a, alpha, sign, t_start);
    case Scenario::subcritical_direct:
      return EquationSpec::direct(a, alpha, sign, t_start);
    case Scenario::gp:
      if (alpha != 2.0 || sign != Sign::defocusing)
        throw std::invalid_argument("gp requires alpha = 2 and the defocusing sign");
      return EquationSpec::gross_pitaevskii();
    case Scenario::plane_wave:
      if (alpha != 2.0) throw std::invalid_argument("plane-wave requires alpha = 2");
      return EquationSpec::constant_cubic(sign);
    case Scenario::filament_corner:
      break;
  }
  throw std::invalid_argument("scenario has no evolution equation");
}

TimeMesh RunConfig::time_mesh() const { return TimeMesh{t_start, t_end, steps, mesh}; }

KeyValues parse_key_values(std::string_view text) {
  const auto& keys = config_keys();
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no);
    // An empty output directory means "write nothing".
    if (value.empty() && key != "out") throw ConfigError("missing value for '" + key + "'", line_no);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown key '" + key + "'", line_no);
    if (auto it = out.find(key); it != out.end())
      throw ConfigError("duplicate key '" + key + "' (first on line " + std::to_string(it->second.line) +
                            ", again on line " + std::to_string(line_no) + ")",
                        line_no);
    out[key] = {value, line_no};
  }
  return out;
}

namespace {

double parse_double(const std::string& key, const ConfigEntry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw ConfigError("'" + key + "' expects a finite number, got '" + e.value + "'", e.line);
  return v;
}

template <class Int>
Int parse_int(const std::string& key, const ConfigEntry& e) {
  Int v{};
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("'" + key + "' expects an integer, got '" + e.value + "'", e.line);
  return v;
}

bool parse_bool(const std::string& key, const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw ConfigError("'" + key + "' expects true or false", e.line);
}

std::vector<double> parse_list(const std::string& key, const ConfigEntry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, {trim(item), e.line}));
  if (out.empty()) throw ConfigError("'" + key + "' expects a comma-separated list", e.line);
  return out;
}

void apply(RunConfig& c, const std::string& key, const ConfigEntry& e) {
  const auto choose = [&](std::initializer_list<std::string_view> options) {
    std::size_t i = 0;
    for (auto o : options) {
      if (e.value == o) return i;
      ++i;
    }
    std::string msg = "'" + key + "' must be one of";
    for (auto o : options) msg += " " + std::string(o);
    throw ConfigError(msg, e.line);
  };
  if (key == "scenario") return;  // resolved first
  if (key == "n") c.n = parse_int<std::size_t>(key, e);
  else if (key == "half_width") c.half_width = parse_double(key, e);
  else if (key == "t_start") c.t_start = parse_double(key, e);
  else if (key == "t_end") c.t_end = parse_double(key, e);
  else if (key == "steps") c.steps = parse_int<std::size_t>(key, e);
  else if (key == "mesh") c.mesh = choose({"uniform", "logarithmic"}) == 0 ? MeshRule::uniform : MeshRule::logarithmic;
  else if (key == "a_mod") c.a_mod = parse_double(key, e);
  else if (key == "a_arg") c.a_arg = parse_double(key, e);
  else if (key == "alpha") c.alpha = parse_double(key, e);
  else if (key == "sign") c.sign = choose({"focusing", "defocusing"}) == 0 ? Sign::focusing : Sign::defocusing;
  else if (key == "sigma") {
    c.sigma = parse_int<int>(key, e);
    if (c.sigma != 1 && c.sigma != -1 && c.sigma != 0) throw ConfigError("'sigma' must be 1 or -1", e.line);
  } else if (key == "profile") c.profile = static_cast<Profile>(choose({"gaussian", "mode", "zero"}));
  else if (key == "amp") c.amp = parse_double(key, e);
  else if (key == "width") c.width = parse_double(key, e);
  else if (key == "mode") c.mode = parse_int<int>(key, e);
  else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, e);
  else if (key == "out") c.out = e.value;
  else if (key == "format") c.format = choose({"csv", "json"}) == 0 ? OutputFormat::csv : OutputFormat::json;
  else if (key == "snapshots") c.snapshots = parse_int<std::size_t>(key, e);
  else if (key == "cadence") c.cadence = parse_int<std::size_t>(key, e);
  else if (key == "check.energy_tolerance") c.energy_tolerance = parse_double(key, e);
  else if (key == "fault.flip_nonlinear_sign") c.fault_flip_nonlinear_sign = parse_bool(key, e);
  else if (key == "filament.c0") c.c0 = parse_double(key, e);
  else if (key == "filament.metric")
    c.metric = choose({"euclidean", "minkowski"}) == 0 ? MetricSign::euclidean : MetricSign::minkowski;
  else if (key == "filament.h") c.curve_h = parse_double(key, e);
  else if (key == "filament.half_width") c.curve_half_width = parse_double(key, e);
  else if (key == "filament.times") c.curve_times = parse_list(key, e);
  else throw ConfigError("unknown key '" + key + "'", e.line);
}

}  // namespace

RunConfig build_config(const KeyValues& file, const KeyValues& overrides) {
  const auto& keys = config_keys();
  for (const auto& [k, e] : overrides)
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key '" + k + "'");

  Scenario scenario = Scenario::critical_defocusing;
  if (auto it = overrides.find("scenario"); it != overrides.end()) scenario = scenario_from_name(it->second.value);
  else if (auto jt = file.find("scenario"); jt != file.end()) {
    try {
      scenario = scenario_from_name(jt->second.value);
    } catch (const ConfigError& err) {
      throw ConfigError(err.what(), jt->second.line);
    }
  }

  RunConfig c = defaults_for(scenario);
  // Apply in the fixed key order so the result does not depend on map order.
  for (const auto& k : keys) {
    auto ov = overrides.find(k);
    if (ov != overrides.end()) apply(c, k, ov->second);
    else if (auto f = file.find(k); f != file.end()) apply(c, k, f->second);
  }
  c.validate();
  return c;
}

RunConfig parse_config(std::string_view text, const KeyValues& overrides) {
  return build_config(parse_key_values(text), overrides);
}

std::vector<std::pair<std::string, std::string>> config_to_key_values(const RunConfig& c) {
  std::string times;
  for (std::size_t i = 0; i < c.curve_times.size(); ++i) times += (i ? "," : "") + format_double(c.curve_times[i]);
  static constexpr std::string_view profiles[] = {"gaussian", "mode", "zero"};
  return {
      {"scenario", std::string(scenario_name(c.scenario))},
      {"n", std::to_string(c.n)},
      {"half_width", format_double(c.half_width)},
      {"t_start", format_double(c.t_start)},
      {"t_end", format_double(c.t_end)},
      {"steps", std::to_string(c.steps)},
      {"mesh", c.mesh == MeshRule::uniform ? "uniform" : "logarithmic"},
      {"a_mod", format_double(c.a_mod)},
      {"a_arg", format_double(c.a_arg)},
      {"alpha", format_double(c.alpha)},
      {"sign", c.sign == Sign::focusing ? "focusing" : "defocusing"},
      {"sigma", std::to_string(c.sigma)},
      {"profile", std::string(profiles[static_cast<int>(c.profile)])},
      {"amp", format_double(c.amp)},
      {"width", format_double(c.width)},
      {"mode", std::to_string(c.mode)},
      {"seed", std::to_string(c.seed)},
      {"out", c.out},
      {"format", c.format == OutputFormat::csv ? "csv" : "json"},
      {"snapshots", std::to_string(c.snapshots)},
      {"cadence", std::to_string(c.cadence)},
      {"check.energy_tolerance", format_double(c.energy_tolerance)},
      {"fault.flip_nonlinear_sign", c.fault_flip_nonlinear_sign ? "true" : "false"},
      {"filament.c0", format_double(c.c0)},
      {"filament.metric", c.metric == MetricSign::euclidean ? "euclidean" : "minkowski"},
      {"filament.h", format_double(c.curve_h)},
      {"filament.half_width", format_double(c.curve_half_width)},
      {"filament.times", times},
  };
}

}  // namespace dnls
