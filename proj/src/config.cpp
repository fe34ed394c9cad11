#include "pulsefront/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pulsefront/error.hpp"

namespace pulsefront {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_number(v[i]);
  }
  return out;
}

struct Field {
  const char* name;
  bool mandatory;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename M>
Field number(const char* name, M member, bool mandatory = false) {
  return {name, mandatory, [=](ScenarioConfig& c, const std::string& t) { c.*member = to_double(name, t); },
          [=](const ScenarioConfig& c) { return format_number(c.*member); }};
}

template <typename M>
Field param(const char* name, M member) {
  return {name, true, [=](ScenarioConfig& c, const std::string& t) { c.params.*member = to_double(name, t); },
          [=](const ScenarioConfig& c) { return format_number(c.params.*member); }};
}

Field integer(const char* name, int ScenarioConfig::*member) {
  return {name, false, [=](ScenarioConfig& c, const std::string& t) { c.*member = to_int(name, t); },
          [=](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

Field list(const char* name, std::vector<double> ScenarioConfig::*member) {
  return {name, false, [=](ScenarioConfig& c, const std::string& t) { c.*member = to_list(name, t); },
          [=](const ScenarioConfig& c) { return list_text(c.*member); }};
}

Field choice(const char* name, std::string ScenarioConfig::*member, std::initializer_list<const char*> allowed) {
  std::vector<const char*> keep(allowed);
  return {name, false,
          [=](ScenarioConfig& c, const std::string& t) {
            bool ok = std::any_of(keep.begin(), keep.end(), [&](const char* a) { return t == a; });
            if (!ok) {
              std::string msg = std::string(name) + ": '" + t + "' is not one of";
              for (const char* a : keep) msg += std::string(" ") + a;
              throw ConfigError(msg);
            }
            c.*member = t;
          },
          [=](const ScenarioConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      param("d1", &ModelParams::d1),
      param("d2", &ModelParams::d2),
      param("a11", &ModelParams::a11),
      param("a12", &ModelParams::a12),
      param("a22", &ModelParams::a22),
      param("mu1", &ModelParams::mu1),
      param("mu2", &ModelParams::mu2),
      param("tau", &ModelParams::tau),
      param("h0", &ModelParams::h0),
      choice("growth", &ScenarioConfig::growth, {"saturating"}),
      number("growth_c", &ScenarioConfig::growth_c, true),
      number("growth_b", &ScenarioConfig::growth_b, true),
      choice("pulse", &ScenarioConfig::pulse, {"identity", "linear", "beverton-holt"}),
      number("pulse_c1", &ScenarioConfig::pulse_c1),
      number("pulse_c2", &ScenarioConfig::pulse_c2),
      number("pulse_c3", &ScenarioConfig::pulse_c3),
      number("kernel_radius", &ScenarioConfig::kernel_radius),
      number("u0_amplitude", &ScenarioConfig::u0_amplitude),
      number("v0_amplitude", &ScenarioConfig::v0_amplitude),
      number("dx", &ScenarioConfig::dx),
      number("dt_scale", &ScenarioConfig::dt_scale),
      number("T", &ScenarioConfig::T),
      integer("outputs_per_period", &ScenarioConfig::outputs_per_period),
      list("snapshot_times", &ScenarioConfig::snapshot_times),
      number("window_cap", &ScenarioConfig::window_cap),
      number("half_length", &ScenarioConfig::half_length),
      integer("n_nodes", &ScenarioConfig::n_nodes),
      choice("endpoints", &ScenarioConfig::endpoints, {"closed", "clamped"}),
      choice("sweep_axis", &ScenarioConfig::sweep_axis, {"l", "z"}),
      list("sweep_values", &ScenarioConfig::sweep_values),
      integer("threads", &ScenarioConfig::threads),
      number("tol", &ScenarioConfig::tol),
      integer("max_iterations", &ScenarioConfig::max_iterations),
      integer("slices", &ScenarioConfig::slices),
      integer("horizon", &ScenarioConfig::horizon),
      number("mu_ratio", &ScenarioConfig::mu_ratio),
      number("mu_lo", &ScenarioConfig::mu_lo),
      number("mu_hi", &ScenarioConfig::mu_hi),
      number("rel_width", &ScenarioConfig::rel_width),
      number("decay_slope", &ScenarioConfig::decay_slope),
      number("vanish_increment", &ScenarioConfig::vanish_increment),
      number("spread_increment", &ScenarioConfig::spread_increment),
      number("spread_sup", &ScenarioConfig::spread_sup),
      {"out_dir", false, [](ScenarioConfig& c, const std::string& t) { c.out_dir = t; },
       [](const ScenarioConfig& c) { return c.out_dir; }},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() { return {"example-5.1-identity", "example-5.1-pulsed", "spreading-preset"}; }

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.preset = name;
  c.params = ModelParams{0.10, 0.10, 0.35, 0.11, 0.10, 20.0, 200.0, 1.0, 2.0};
  c.growth_c = 0.5;
  c.growth_b = 10.0;
  if (name == "example-5.1-identity") return c;
  if (name == "example-5.1-pulsed") {
    c.pulse = "beverton-holt";
    c.pulse_c2 = 0.1;
    c.pulse_c3 = 10.0;
    return c;
  }
  if (name == "spreading-preset") {
    c.growth_b = 1.0;
    return c;
  }
  throw ConfigError("preset: unknown name '" + name + "'");
}

ScenarioConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key + ": duplicate key");
    entries.emplace_back(std::move(key), std::move(value));
  }

  ScenarioConfig c;
  bool from_preset = false;
  for (const auto& [key, value] : entries) {
    if (key == "preset" && !value.empty()) {
      c = preset(value);
      from_preset = true;
    }
  }

  std::map<std::string, const Field*> index;
  for (const auto& f : fields()) index[f.name] = &f;
  for (const auto& [key, value] : entries) {
    if (key == "preset") continue;
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError(key + ": unknown key");
    it->second->set(c, value);
  }

  if (!from_preset) {
    for (const auto& f : fields())
      if (f.mandatory && !seen.count(f.name)) throw ConfigError(std::string(f.name) + ": missing mandatory key");
  }
  return c;
}

std::string serialize(const ScenarioConfig& c) {
  std::string out = "preset = " + c.preset + "\n";
  for (const auto& f : fields()) out += std::string(f.name) + " = " + f.get(c) + "\n";
  return out;
}

std::string config_hash(const ScenarioConfig& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : serialize(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GrowthSpec ScenarioConfig::growth_spec() const { return GrowthSpec::saturating(growth_c, growth_b); }

PulseSpec ScenarioConfig::pulse_spec() const {
  if (pulse == "linear") return PulseSpec::linear(pulse_c1);
  if (pulse == "beverton-holt") return PulseSpec::beverton_holt(pulse_c2, pulse_c3);
  return PulseSpec::identity();
}

KernelSpec ScenarioConfig::kernel_spec() const { return KernelSpec::bump(kernel_radius); }

SimulationOptions ScenarioConfig::simulation_options() const {
  SimulationOptions o;
  o.dx = dx;
  o.dt_scale = dt_scale;
  o.outputs_per_period = outputs_per_period;
  o.snapshot_times = snapshot_times;
  o.window_cap = window_cap;
  o.u0_amplitude = u0_amplitude;
  o.v0_amplitude = v0_amplitude;
  return o;
}

SpectralOptions ScenarioConfig::spectral_options() const {
  SpectralOptions o;
  o.endpoints = endpoints == "clamped" ? EndpointMode::Clamped : EndpointMode::Closed;
  return o;
}

OutcomeThresholds ScenarioConfig::thresholds() const {
  OutcomeThresholds t;
  t.decay_slope = decay_slope;
  t.vanish_increment = vanish_increment;
  t.spread_increment = spread_increment;
  t.spread_sup = spread_sup;
  return t;
}

MuStarOptions ScenarioConfig::mu_star_options() const {
  MuStarOptions o;
  o.ratio = mu_ratio;
  o.lo = mu_lo;
  o.hi = mu_hi;
  o.horizon = horizon;
  o.rel_width = rel_width;
  o.simulation = simulation_options();
  o.thresholds = thresholds();
  return o;
}

}  // namespace pulsefront
