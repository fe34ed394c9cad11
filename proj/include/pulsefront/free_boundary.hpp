#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pulsefront/fixed_domain.hpp"
#include "pulsefront/grid.hpp"
#include "pulsefront/model.hpp"
#include "pulsefront/spectral.hpp"

namespace pulsefront {

struct FrontState {
  double g = 0.0;
  double h = 0.0;
  double gprime = 0.0;
  double hprime = 0.0;
};

/// (g', h') from the outward-flux integrals with the kernel tail mass.
std::pair<double, double> boundary_speeds(const Grid& grid, const FieldPair& fields, Interval fronts,
                                          const Kernel& kernel, double mu1, double mu2);

struct OutputRow {
  double t = 0.0;
  FrontState front;
  double sup_u = 0.0;
  double sup_v = 0.0;
  double min_u = 0.0;  ///< over nodes strictly inside (g, h)
  double min_v = 0.0;
};

/// Fields at t = k tau just before the pulse.
struct PeriodRecord {
  int k = 0;
  double t = 0.0;
  double g = 0.0;
  double h = 0.0;
  double sup_u = 0.0;
  double sup_v = 0.0;
};

struct Snapshot {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

struct Trajectory {
  std::vector<OutputRow> rows;
  std::vector<PeriodRecord> periods;
  std::vector<Snapshot> snapshots;
  double dt = 0.0;
  double dx = 0.0;
  Index steps_per_period = 0;
  bool stopped_early = false;
};

struct SimulationOptions {
  double dx = 0.05;
  double dt_scale = 1.0;
  int outputs_per_period = 10;
  std::vector<double> snapshot_times;  ///< rounded to the nearest step
  double window_cap = 1e4;             ///< largest allowed |x| of the grid window
  double u0_amplitude = 3.0;           ///< u0 = A cos(pi x / (2 h0))
  double v0_amplitude = 1.0;
  /// Called after each completed period; returning true ends the run.
  std::function<bool(const std::vector<PeriodRecord>&)> stop;
};

/// Explicit Euler for the densities and both fronts; pulse on u at every t = k tau
/// (including t = 0). Outputs at pulse instants hold the pre-pulse values.
Trajectory simulate(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse, const Kernel& kernel,
                    double T, const SimulationOptions& options = {});

enum class Verdict { Vanishing, Spreading, ThresholdRegime, Indeterminate };

std::string to_string(Verdict v);

struct OutcomeThresholds {
  double decay_slope = -1e-3;         ///< log sup-norm slope per period
  double vanish_increment = 1e-6;     ///< per-period growth of h - g
  double spread_increment = 1e-3;
  double spread_sup = 1e-3;
  /// When set, h - g > 2 l* at any recorded period certifies spreading.
  std::optional<double> critical_length;
};

struct Outcome {
  Verdict verdict = Verdict::Indeterminate;
  std::string reason;
  double log_slope = 0.0;
  double last_increment = 0.0;
  int periods = 0;
};

/// Finite-horizon verdict from the per-period records of a trajectory.
Outcome detect_outcome(const Trajectory& trajectory, int horizon, const OutcomeThresholds& thresholds = {});
Outcome detect_outcome(const std::vector<PeriodRecord>& periods, int horizon,
                       const OutcomeThresholds& thresholds = {});

struct MuStarOptions {
  double ratio = 10.0;      ///< mu2 / mu1
  double lo = 0.0;          ///< bracket on mu1; lo must vanish, hi must spread
  double hi = 0.0;
  int horizon = 400;        ///< periods per probe
  double rel_width = 0.05;
  bool use_critical_length = true;
  SimulationOptions simulation;
  OutcomeThresholds thresholds;
};

struct MuProbe {
  double mu1 = 0.0;
  Outcome outcome;
};

struct MuStarResult {
  double mu_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<MuProbe> probes;
};

/// Outcome of one simulated probe with mu1 = mu, mu2 = ratio mu.
Outcome probe_outcome(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                      const Kernel& kernel, double mu, const MuStarOptions& options);

/// Geometric bisection on mu1 to relative width rel_width; returns sqrt(lo hi).
/// Throws InvalidBracket or IndeterminateOutcome.
MuStarResult find_mu_star(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                          const Kernel& kernel, const MuStarOptions& options);

struct ClassifyOptions {
  double zero_band = 1e-6;     ///< |mu1| below this counts as zero
  double eigen_dx = 0.05;      ///< target spacing for lambda1(h0)
  Index min_nodes = 101;
  Index max_nodes = 401;
  bool find_mu_star = false;
  MuStarOptions mu_star;
};

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  double mu1 = 0.0;                      ///< lambda1 on the whole line
  std::optional<double> lambda1_h0;
  std::optional<double> critical_length;
  std::optional<double> mu_star;
  std::vector<std::pair<std::string, std::string>> evidence;
};

Classification classify(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                        const Kernel& kernel, const ClassifyOptions& options = {});

}  // namespace pulsefront
