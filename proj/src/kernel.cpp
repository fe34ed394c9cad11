#include "pulsefront/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pulsefront/error.hpp"
#include "pulsefront/grid.hpp"

namespace pulsefront {

namespace {

constexpr int kTailCells = 4096;

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};

template <typename F>
double gauss_cell(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) sum += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
  return half * sum;
}

}  // namespace

double Kernel::shape(double r) const {
  if (r >= radius_) return 0.0;
  if (spec_.family == KernelSpec::Family::Bump) {
    const double q = r / radius_;
    return std::exp(1.0 / (q * q - 1.0));
  }
  const auto& tab = spec_.table;
  const double step = radius_ / static_cast<double>(tab.size() - 1);
  const double pos = r / step;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), tab.size() - 2);
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * tab[i] + t * tab[i + 1];
}

double Kernel::operator()(double x) const { return k_ * shape(std::abs(x)); }

double Kernel::tail_mass(double s) const {
  if (s < 0.0) return 1.0 - tail_mass(-s);
  if (s >= radius_) return 0.0;
  const double pos = s / tail_step_;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), tail_.size() - 2);
  const double t = pos - static_cast<double>(i);
  const double s0 = tail_step_ * static_cast<double>(i);
  // Cubic Hermite with K' = -J.
  const double d0 = -(*this)(s0) * tail_step_;
  const double d1 = -(*this)(s0 + tail_step_) * tail_step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * tail_[i] + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * tail_[i + 1] +
         (t3 - t2) * d1;
}

Eigen::VectorXd Kernel::taps(double dx) const {
  const auto half = static_cast<Index>(std::floor(radius_ / dx));
  Eigen::VectorXd out(2 * half + 1);
  for (Index i = -half; i <= half; ++i) out(i + half) = dx * (*this)(static_cast<double>(i) * dx);
  return out;
}

Kernel build_kernel(const KernelSpec& spec) {
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius))
    throw InvalidKernel("kernel radius must be positive and finite");

  Kernel kernel;
  kernel.spec_ = spec;
  kernel.radius_ = spec.radius;

  double mass = 0.0;
  if (spec.family == KernelSpec::Family::Bump) {
    kernel.k_ = 1.0;
    mass = 2.0 * adaptive_simpson([&](double r) { return kernel.shape(r); }, 0.0, spec.radius, 1e-15);
  } else {
    const auto& tab = spec.table;
    if (tab.size() < 2) throw InvalidKernel("kernel table needs at least two samples");
    for (double v : tab) {
      if (!std::isfinite(v) || v < 0.0) throw InvalidKernel("kernel table must be finite and non-negative");
    }
    if (!(tab.front() > 0.0)) throw InvalidKernel("kernel table must be positive at the origin");
    const double step = spec.radius / static_cast<double>(tab.size() - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < tab.size(); ++i) sum += 0.5 * (tab[i] + tab[i + 1]) * step;
    mass = 2.0 * sum;
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidKernel("kernel is not integrable");
  kernel.k_ = 1.0 / mass;

  kernel.half_moment_ = adaptive_simpson([&](double r) { return r * kernel(r); }, 0.0, spec.radius, 1e-15);

  kernel.tail_step_ = spec.radius / kTailCells;
  kernel.tail_.assign(kTailCells + 1, 0.0);
  for (int i = kTailCells - 1; i >= 0; --i) {
    const double a = kernel.tail_step_ * i;
    kernel.tail_[i] = kernel.tail_[i + 1] + gauss_cell([&](double r) { return kernel(r); }, a, a + kernel.tail_step_);
  }
  return kernel;
}

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(double xmin, double dx, Index size) : xmin_(xmin), dx_(dx), size_(size) {
  if (!(dx > 0.0)) throw GridError("grid spacing must be positive");
  if (size < 1) throw GridError("grid needs at least one node");
}

Grid Grid::covering(double a, double b, double dx) {
  if (!(b > a)) throw GridError("grid interval must have positive length");
  if (!(dx > 0.0)) throw GridError("grid spacing must be positive");
  const auto cells = std::max<Index>(1, static_cast<Index>(std::llround((b - a) / dx)));
  return Grid(a, (b - a) / static_cast<double>(cells), cells + 1);
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd out(size_);
  for (Index i = 0; i < size_; ++i) out(i) = x(i);
  return out;
}

Grid Grid::extended(Index left, Index right) const {
  return Grid(xmin_ - dx_ * static_cast<double>(left), dx_, size_ + left + right);
}

ActiveNodes active_nodes(const Grid& grid, Interval interval) {
  const double dx = grid.dx();
  const double snap = 1e-9 * dx;
  ActiveNodes act;
  // First node with x > lo + snap.
  auto first = static_cast<Index>(std::floor((interval.lo + snap - grid.xmin()) / dx)) + 1;
  auto last = static_cast<Index>(std::ceil((interval.hi - snap - grid.xmin()) / dx)) - 1;
  first = std::max<Index>(first, 0);
  last = std::min<Index>(last, grid.size() - 1);
  while (first <= last && grid.x(first) <= interval.lo + snap) ++first;
  while (first > 0 && grid.x(first - 1) > interval.lo + snap) --first;
  while (last >= first && grid.x(last) >= interval.hi - snap) --last;
  while (last + 1 < grid.size() && grid.x(last + 1) < interval.hi - snap) ++last;
  act.first = first;
  act.last = last;
  if (act.empty()) return act;
  if (first == last) {
    act.first_weight = act.last_weight = 0.5 * interval.length() / dx;
    return act;
  }
  act.first_weight = 0.5 + 0.5 * (grid.x(first) - interval.lo) / dx;
  act.last_weight = 0.5 + 0.5 * (interval.hi - grid.x(last)) / dx;
  return act;
}

Eigen::VectorXd quadrature_weights(const Grid& grid, Interval interval) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(grid.size());
  const auto act = active_nodes(grid, interval);
  for (Index i = act.first; i <= act.last; ++i) w(i) = grid.dx() * act.weight(i);
  return w;
}

// ---------------------------------------------------------------------------
// Convolver

Convolver::Convolver(const Kernel& kernel, double dx) : taps_(kernel.taps(dx)) {
  half_width_ = (taps_.size() - 1) / 2;
}

void Convolver::apply(const Eigen::VectorXd& field, const ActiveNodes& active, Index out_first,
                      Index out_last, Eigen::VectorXd& out) const {
  const Index s = half_width_;
  if (active.empty()) {
    for (Index i = out_first; i <= out_last; ++i) out(i) = 0.0;
    return;
  }
  const double corr_first = active.first_weight - 1.0;
  const double corr_last = active.last_weight - 1.0;
  for (Index i = out_first; i <= out_last; ++i) {
    const Index lo = std::max(active.first, i - s);
    const Index hi = std::min(active.last, i + s);
    if (hi < lo) {
      out(i) = 0.0;
      continue;
    }
    double acc = taps_.segment(lo - i + s, hi - lo + 1).dot(field.segment(lo, hi - lo + 1));
    if (active.first == active.last) {
      acc += corr_first * taps_(active.first - i + s) * field(active.first);
    } else {
      if (lo == active.first) acc += corr_first * taps_(active.first - i + s) * field(active.first);
      if (hi == active.last) acc += corr_last * taps_(active.last - i + s) * field(active.last);
    }
    out(i) = acc;
  }
}

Eigen::VectorXd convolve(const Kernel& kernel, const Grid& grid, const Eigen::VectorXd& field,
                         Interval interval) {
  if (field.size() != grid.size()) throw GridError("field size does not match grid");
  const double slack = 1e-9 * grid.dx();
  if (interval.lo < grid.xmin() - slack || interval.hi > grid.xmax() + slack || !(interval.hi > interval.lo))
    throw GridError("interval is not inside the grid window");
  Convolver conv(kernel, grid.dx());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.size());
  conv.apply(field, active_nodes(grid, interval), 0, grid.size() - 1, out);
  return out;
}

}  // namespace pulsefront
