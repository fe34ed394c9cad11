#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pulsefront/kernel.hpp"

namespace pulsefront {

/// Scalar rates of the pulsed faecal-oral system.
///
/// d1, d2 are dispersal rates, a11 the agent mortality, a12 the agent output of
/// infecteds, a22 the infected death rate, mu1/mu2 the expansion capacities,
/// tau the pulse period and h0 the initial half-length of the infected region.
struct ModelParams {
  double d1 = 0.0;
  double d2 = 0.0;
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double tau = 1.0;
  double h0 = 1.0;

  bool operator==(const ModelParams&) const = default;
};

/// Infection force G(u) of humans by agents.
class GrowthSpec {
public:
  enum class Form { Saturating, Custom };

  /// G(u) = c u / (b + u).
  static GrowthSpec saturating(double c, double b);
  /// Arbitrary curve with a known slope at zero.
  static GrowthSpec custom(double slope_at_zero, std::function<double(double)> eval,
                           std::string label = "custom");

  double operator()(double u) const {
    return form_ == Form::Saturating ? c_ * u / (b_ + u) : eval_(u);
  }
  double slope_at_zero() const noexcept { return slope0_; }
  Form form() const noexcept { return form_; }
  double c() const noexcept { return c_; }
  double b() const noexcept { return b_; }
  const std::string& label() const noexcept { return label_; }

  /// Same curve with G scaled by `factor` (slope scales too).
  GrowthSpec scaled(double factor) const;

private:
  Form form_ = Form::Saturating;
  double c_ = 0.0;
  double b_ = 1.0;
  double slope0_ = 0.0;
  std::function<double(double)> eval_;
  std::string label_;
};

/// Pulse map H applied to the agent density at t = k tau.
class PulseSpec {
public:
  enum class Form { Identity, Linear, BevertonHolt };

  static PulseSpec identity();
  /// H(u) = c1 u.
  static PulseSpec linear(double c1);
  /// H(u) = c2 u / (c3 + u).
  static PulseSpec beverton_holt(double c2, double c3);

  double operator()(double u) const {
    switch (form_) {
      case Form::Identity: return u;
      case Form::Linear: return p_ * u;
      case Form::BevertonHolt: return p_ * u / (q_ + u);
    }
    return u;
  }
  /// z = H'(0).
  double slope_at_zero() const noexcept;
  Form form() const noexcept { return form_; }
  double first() const noexcept { return p_; }
  double second() const noexcept { return q_; }

private:
  Form form_ = Form::Identity;
  double p_ = 1.0;
  double q_ = 1.0;
};

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  std::optional<double> witness;  ///< sample where the check failed
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  bool ok() const;
  /// First failed check, if any.
  const AssumptionCheck* first_failure() const;
  /// All checks whose name starts with `prefix`.
  bool passed(const std::string& prefix) const;
};

/// Sampled verification of positivity, (G), (H) and (J).
///
/// Samples 200 log-spaced points on [1e-6, 1e6] plus the analytic slope at zero.
/// Never throws: failures are reported with the offending sample.
ValidationReport validate(const ModelParams& params, const GrowthSpec& growth,
                          const PulseSpec& pulse, const KernelSpec& kernel);

/// Log-spaced sample abscissae used by validate().
std::vector<double> assumption_samples();

struct SolutionBounds {
  double c1_bound = 0.0;
  double c2_bound = 0.0;
  double u_star = 0.0;
};

/// a12 G'(0) / (a11 a22).
double reproduction_ratio(const ModelParams& params, const GrowthSpec& growth);

/// Invariant box (C1, C2) for the densities.
///
/// u* solves G(u)/u = a11 a22 / a12 when the reproduction ratio exceeds one
/// (bisection on [1e-12, 1e12]); otherwise u* = 0. Throws RootNotBracketed when
/// G violates the tail bound of (G).
SolutionBounds compute_bounds(const ModelParams& params, const GrowthSpec& growth,
                              double u0_sup, double v0_sup);

}  // namespace pulsefront
