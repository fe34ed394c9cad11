#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Core>

#include "pulsefront/grid.hpp"
#include "pulsefront/model.hpp"

namespace pulsefront {

/// Sampled densities on a grid. Nodes outside the active interval hold zero.
struct FieldPair {
  Eigen::VectorXd u;
  Eigen::VectorXd v;

  Index size() const noexcept { return u.size(); }
  double sup() const { return size() == 0 ? 0.0 : std::max(u.maxCoeff(), v.maxCoeff()); }
};

/// u <- H(u) pointwise, v untouched.
FieldPair apply_pulse(FieldPair fields, const PulseSpec& pulse);
void apply_pulse_inplace(FieldPair& fields, const PulseSpec& pulse);

/// Explicit Euler steps per period: ceil(tau / min(tau/2000, 0.2/S)) with S the
/// sum of all rates, multiplied by 1/dt_scale.
Index steps_per_period(const ModelParams& params, const GrowthSpec& growth, double dt_scale = 1.0);

/// One explicit Euler step of the nonlocal reaction system restricted to the
/// active nodes. Owns its convolution scratch, so one stepper per run.
class EulerStepper {
public:
  EulerStepper() = default;
  EulerStepper(const ModelParams& params, const GrowthSpec& growth, const Kernel& kernel, double dx);

  /// Throws InstabilityError when a value turns negative or non-finite.
  void step(FieldPair& fields, const ActiveNodes& active, double dt);

  const Convolver& convolver() const noexcept { return conv_; }

private:
  ModelParams params_;
  GrowthSpec growth_;
  Convolver conv_;
  Eigen::VectorXd cu_, cv_;
};

struct FixedProblem {
  ModelParams params;
  GrowthSpec growth;
  PulseSpec pulse;
  Kernel kernel;
  Interval interval;
  double dx = 0.05;
  double dt_scale = 1.0;
};

/// Method-of-lines solver on a fixed interval [r, s]; the endpoint nodes stay zero.
class FixedDomain {
public:
  explicit FixedDomain(FixedProblem problem);

  const FixedProblem& problem() const noexcept { return problem_; }
  const Grid& grid() const noexcept { return grid_; }
  const ActiveNodes& active() const noexcept { return active_; }
  Index steps_per_period() const noexcept { return steps_; }
  double dt() const noexcept { return problem_.params.tau / static_cast<double>(steps_); }

  FieldPair zero() const;
  /// Constant values on the interior nodes.
  FieldPair constant(double u, double v) const;
  /// u = au cos(pi (x - c)/(s - r)), v likewise, c the midpoint.
  FieldPair cosine(double au, double av) const;

  void step(FieldPair& fields, double dt);
  /// Pulse then one period of flow.
  FieldPair period_map(FieldPair fields);
  /// Pulse then one period, returning slices+1 pre-pulse states at t = k tau / slices
  /// (slice 0 is the input) and the post-pulse state at 0+.
  std::vector<FieldPair> period_slices(const FieldPair& start, int slices, FieldPair* post_pulse = nullptr);

private:
  FixedProblem problem_;
  Grid grid_;
  ActiveNodes active_;
  Index steps_ = 0;
  EulerStepper stepper_;
};

/// Convenience wrappers over a throwaway FixedDomain.
FieldPair step_fixed(const FieldPair& fields, const FixedProblem& problem, double dt);
FieldPair period_map(const FieldPair& fields, const FixedProblem& problem);

struct PeriodicState {
  Grid grid;
  std::vector<double> times;       ///< slice times in [0, tau]
  std::vector<FieldPair> slices;   ///< pre-pulse values; slice 0 is t = 0
  FieldPair post_pulse;            ///< value at 0+
  bool zero = false;
};

struct PeriodicOptions {
  double tol = 1e-8;              ///< bound on the estimated distance to the limit
  int max_iterations = 5000;
  int slices = 50;
  double u0_sup = 3.0;            ///< sup-norms fed to the upper bound
  double v0_sup = 1.0;
  Index eigen_nodes = 201;        ///< resolution of the lower-start eigenfunction
};

struct MonotoneRun {
  PeriodicState limit;
  int iterations = 0;
  bool converged = false;
  double last_change = 0.0;
  double worst_violation = 0.0;  ///< largest step against the expected ordering
};

struct PeriodicResult {
  MonotoneRun upper;
  MonotoneRun lower;
  double lower_scale = 0.0;  ///< epsilon of the lower start; zero when no eigen-subsolution exists
  double gap = 0.0;          ///< sup over slices of |upper - lower|
  bool converged = false;
  bool zero = false;

  /// Upper limit, the reported periodic state.
  const PeriodicState& state() const noexcept { return upper.limit; }
};

/// Double monotone iteration of the period map from (C1, C2) and from a small
/// multiple of the principal eigenfunction.
PeriodicResult periodic_state(const FixedProblem& problem, const PeriodicOptions& options = {});

struct LimitOdeResult {
  std::vector<double> times;  ///< k tau, pre-pulse
  std::vector<Eigen::Vector2d> states;
  double last_change = 0.0;   ///< |state(K) - state(K-1)|_inf
};

/// Space-free impulsive system zeta' = a12 eta - a11 zeta, eta' = G(zeta) - a22 eta,
/// zeta(k tau+) = H(zeta(k tau)); classical RK4 with tau/2000 steps.
LimitOdeResult solve_limit_ode(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                               double T, Eigen::Vector2d initial = Eigen::Vector2d(3.0, 1.0));

}  // namespace pulsefront
