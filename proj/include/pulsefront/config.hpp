#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pulsefront/free_boundary.hpp"
#include "pulsefront/model.hpp"
#include "pulsefront/spectral.hpp"

namespace pulsefront {

/// Every knob of a run as a flat set of scalars.
struct ScenarioConfig {
  std::string preset;

  ModelParams params;
  std::string growth = "saturating";
  double growth_c = 0.0;
  double growth_b = 0.0;
  std::string pulse = "identity";  ///< identity | linear | beverton-holt
  double pulse_c1 = 1.0;
  double pulse_c2 = 0.1;
  double pulse_c3 = 10.0;
  double kernel_radius = 3.0;
  double u0_amplitude = 3.0;
  double v0_amplitude = 1.0;

  double dx = 0.05;
  double dt_scale = 1.0;
  double T = 24.0;
  int outputs_per_period = 10;
  std::vector<double> snapshot_times;
  double window_cap = 1e4;

  double half_length = 0.0;  ///< interval half-length for eigen/steady; 0 means h0
  int n_nodes = 401;
  std::string endpoints = "closed";  ///< closed | clamped
  std::string sweep_axis = "l";      ///< l | z
  std::vector<double> sweep_values;
  int threads = 0;

  double tol = 1e-8;
  int max_iterations = 5000;
  int slices = 50;

  int horizon = 400;
  double mu_ratio = 10.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double rel_width = 0.05;
  double decay_slope = -1e-3;
  double vanish_increment = 1e-6;
  double spread_increment = 1e-3;
  double spread_sup = 1e-3;

  std::string out_dir;

  bool operator==(const ScenarioConfig&) const = default;

  GrowthSpec growth_spec() const;
  PulseSpec pulse_spec() const;
  KernelSpec kernel_spec() const;
  double interval_half_length() const { return half_length > 0.0 ? half_length : params.h0; }
  SimulationOptions simulation_options() const;
  SpectralOptions spectral_options() const;
  OutcomeThresholds thresholds() const;
  MuStarOptions mu_star_options() const;
};

/// Names accepted by `preset = ...`.
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig preset(const std::string& name);

/// Flat `key = value` text, `#` comments. Throws ConfigError naming the key on an
/// unknown key, a malformed value, a duplicate, or a missing mandatory key.
ScenarioConfig parse_config(const std::string& text);

/// Canonical text with every key in a fixed order; parse_config inverts it.
std::string serialize(const ScenarioConfig& config);

/// Shortest decimal that reads back to the same double.
std::string format_number(double value);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace pulsefront
