#pragma once

#include <Eigen/Core>

#include "pulsefront/kernel.hpp"

namespace pulsefront {

using Index = Eigen::Index;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  double center() const noexcept { return 0.5 * (lo + hi); }
};

/// Uniform node set x_i = xmin + i dx, i = 0..size-1.
class Grid {
public:
  Grid() = default;
  Grid(double xmin, double dx, Index size);

  /// Grid with nodes exactly at a and b and spacing as close to `dx` as possible.
  static Grid covering(double a, double b, double dx);

  double x(Index i) const noexcept { return xmin_ + dx_ * static_cast<double>(i); }
  double xmin() const noexcept { return xmin_; }
  double xmax() const noexcept { return x(size_ - 1); }
  double dx() const noexcept { return dx_; }
  Index size() const noexcept { return size_; }
  Eigen::VectorXd nodes() const;

  /// Same spacing, `left` nodes prepended and `right` nodes appended.
  Grid extended(Index left, Index right) const;

private:
  double xmin_ = 0.0;
  double dx_ = 1.0;
  Index size_ = 0;
};

/// Nodes strictly inside an interval, with clipped trapezoid end weights.
///
/// The integrand is taken as zero at exactly lo and hi, so the two cells that
/// straddle the endpoints contribute only their inner part. Weights are
/// relative to dx.
struct ActiveNodes {
  Index first = 0;
  Index last = -1;
  double first_weight = 1.0;
  double last_weight = 1.0;

  bool empty() const noexcept { return last < first; }
  Index count() const noexcept { return empty() ? 0 : last - first + 1; }
  double weight(Index i) const noexcept {
    if (i == first && i == last) return first_weight;
    if (i == first) return first_weight;
    if (i == last) return last_weight;
    return 1.0;
  }
};

ActiveNodes active_nodes(const Grid& grid, Interval interval);

/// Absolute trapezoid weights on every grid node (zero outside the interval).
Eigen::VectorXd quadrature_weights(const Grid& grid, Interval interval);

/// Toeplitz application of the kernel on a uniform grid.
class Convolver {
public:
  Convolver() = default;
  Convolver(const Kernel& kernel, double dx);

  /// out(i) = sum over active j of w_j J(x_i - x_j) f_j for i in [out_first, out_last].
  /// Entries of `out` outside that range are left untouched.
  void apply(const Eigen::VectorXd& field, const ActiveNodes& active, Index out_first,
             Index out_last, Eigen::VectorXd& out) const;

  Index half_width() const noexcept { return half_width_; }
  const Eigen::VectorXd& taps() const noexcept { return taps_; }

private:
  Eigen::VectorXd taps_;
  Index half_width_ = 0;
};

/// x -> integral over [lo, hi] of J(x - y) f(y) dy at every grid node.
/// Throws GridError when the interval is not inside the grid window.
Eigen::VectorXd convolve(const Kernel& kernel, const Grid& grid, const Eigen::VectorXd& field,
                         Interval interval);

}  // namespace pulsefront
