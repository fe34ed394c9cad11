#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace pulsefront {

/// Description of a compactly supported symmetric dispersal density.
///
/// Bump: J(x) = k exp(1 / ((x/R)^2 - 1)) for |x| < R, 0 otherwise.
/// Table: unnormalised samples of J on a uniform grid over [0, R], linearly
/// interpolated and mirrored; the last sample is the value at R.
struct KernelSpec {
  enum class Family { Bump, Table };

  Family family = Family::Bump;
  double radius = 3.0;
  std::vector<double> table;

  static KernelSpec bump(double radius) { return {Family::Bump, radius, {}}; }
  static KernelSpec from_table(double radius, std::vector<double> samples) {
    return {Family::Table, radius, std::move(samples)};
  }
};

/// Normalised kernel with precomputed tail-mass table.
class Kernel {
public:
  Kernel() = default;

  double operator()(double x) const;
  double radius() const noexcept { return radius_; }
  /// Constant k making the density integrate to one.
  double normalization() const noexcept { return k_; }

  /// K(s) = integral of J over [s, inf); K(s) = 0 for s >= R, K(-s) = 1 - K(s).
  double tail_mass(double s) const;

  /// m = integral of r J(r) over [0, R].
  double first_half_moment() const noexcept { return half_moment_; }

  /// Quadrature taps dx * J(i dx) for i = -S..S with S = floor(R / dx).
  Eigen::VectorXd taps(double dx) const;

  const KernelSpec& spec() const noexcept { return spec_; }

private:
  friend Kernel build_kernel(const KernelSpec& spec);

  double shape(double r) const;  // unnormalised, r >= 0

  KernelSpec spec_;
  double radius_ = 0.0;
  double k_ = 0.0;
  double half_moment_ = 0.0;
  double tail_step_ = 0.0;
  std::vector<double> tail_;  // K at uniform abscissae on [0, R]
};

/// Normalises the spec by adaptive quadrature and tabulates the tail mass.
/// Throws InvalidKernel on a non-positive radius or a non-integrable table.
Kernel build_kernel(const KernelSpec& spec);

/// Adaptive Simpson quadrature used for kernel constants.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 50);

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth) {
  // Split up front so flat-ended integrands cannot fool the first estimate.
  constexpr int pieces = 16;
  const double h = (b - a) / pieces;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == pieces) ? b : lo + h;
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, max_depth);
  }
  return total;
}

}  // namespace pulsefront
