#include "pulsefront/fixed_domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pulsefront/error.hpp"
#include "pulsefront/spectral.hpp"

namespace pulsefront {

void apply_pulse_inplace(FieldPair& fields, const PulseSpec& pulse) {
  if (pulse.form() == PulseSpec::Form::Identity) return;
  fields.u = fields.u.unaryExpr([&](double u) { return pulse(u); });
}

FieldPair apply_pulse(FieldPair fields, const PulseSpec& pulse) {
  apply_pulse_inplace(fields, pulse);
  return fields;
}

Index steps_per_period(const ModelParams& p, const GrowthSpec& growth, double dt_scale) {
  const double rates = p.d1 + p.d2 + p.a11 + p.a22 + p.a12 + growth.slope_at_zero();
  const double dt = std::min(p.tau / 2000.0, 0.2 / rates);
  const double steps = std::ceil(p.tau / dt * (1.0 - 1e-12));
  return std::max<Index>(1, static_cast<Index>(std::ceil(steps / dt_scale - 1e-9)));
}

EulerStepper::EulerStepper(const ModelParams& params, const GrowthSpec& growth, const Kernel& kernel, double dx)
    : params_(params), growth_(growth), conv_(kernel, dx) {}

void EulerStepper::step(FieldPair& f, const ActiveNodes& act, double dt) {
  if (act.empty()) return;
  if (cu_.size() != f.size()) {
    cu_.resize(f.size());
    cv_.resize(f.size());
  }
  conv_.apply(f.u, act, act.first, act.last, cu_);
  conv_.apply(f.v, act, act.first, act.last, cv_);
  const double d1 = params_.d1, d2 = params_.d2;
  const double keep_u = 1.0 - dt * (d1 + params_.a11);
  const double keep_v = 1.0 - dt * (d2 + params_.a22);
  bool bad = false;
  for (Index i = act.first; i <= act.last; ++i) {
    const double u = f.u(i);
    const double v = f.v(i);
    const double nu = keep_u * u + dt * (d1 * cu_(i) + params_.a12 * v);
    const double nv = keep_v * v + dt * (d2 * cv_(i) + growth_(u));
    f.u(i) = nu;
    f.v(i) = nv;
    bad |= !(nu >= 0.0) || !(nv >= 0.0) || !std::isfinite(nu) || !std::isfinite(nv);
  }
  if (bad) {
    std::ostringstream os;
    os << "explicit step produced a negative or non-finite density (dt = " << dt << ")";
    throw InstabilityError(os.str());
  }
}

FixedDomain::FixedDomain(FixedProblem problem) : problem_(std::move(problem)) {
  grid_ = Grid::covering(problem_.interval.lo, problem_.interval.hi, problem_.dx);
  active_ = active_nodes(grid_, problem_.interval);
  steps_ = pulsefront::steps_per_period(problem_.params, problem_.growth, problem_.dt_scale);
  stepper_ = EulerStepper(problem_.params, problem_.growth, problem_.kernel, grid_.dx());
}

FieldPair FixedDomain::zero() const {
  return {Eigen::VectorXd::Zero(grid_.size()), Eigen::VectorXd::Zero(grid_.size())};
}

FieldPair FixedDomain::constant(double u, double v) const {
  FieldPair f = zero();
  for (Index i = active_.first; i <= active_.last; ++i) {
    f.u(i) = u;
    f.v(i) = v;
  }
  return f;
}

FieldPair FixedDomain::cosine(double au, double av) const {
  FieldPair f = zero();
  const double c = problem_.interval.center();
  const double w = problem_.interval.length();
  for (Index i = active_.first; i <= active_.last; ++i) {
    const double s = std::cos(std::numbers::pi * (grid_.x(i) - c) / w);
    f.u(i) = au * s;
    f.v(i) = av * s;
  }
  return f;
}

void FixedDomain::step(FieldPair& fields, double dt) { stepper_.step(fields, active_, dt); }

FieldPair FixedDomain::period_map(FieldPair fields) {
  apply_pulse_inplace(fields, problem_.pulse);
  const double h = dt();
  for (Index s = 0; s < steps_; ++s) step(fields, h);
  return fields;
}

std::vector<FieldPair> FixedDomain::period_slices(const FieldPair& start, int slices, FieldPair* post_pulse) {
  std::vector<FieldPair> out;
  out.reserve(slices + 1);
  out.push_back(start);
  FieldPair f = apply_pulse(start, problem_.pulse);
  if (post_pulse) *post_pulse = f;
  const double h = dt();
  Index done = 0;
  for (int k = 1; k <= slices; ++k) {
    const auto target = static_cast<Index>(std::llround(static_cast<double>(k) * steps_ / slices));
    for (; done < target; ++done) step(f, h);
    out.push_back(f);
  }
  return out;
}

FieldPair step_fixed(const FieldPair& fields, const FixedProblem& problem, double dt) {
  FixedDomain domain(problem);
  FieldPair f = fields;
  domain.step(f, dt);
  return f;
}

FieldPair period_map(const FieldPair& fields, const FixedProblem& problem) {
  FixedDomain domain(problem);
  return domain.period_map(fields);
}

namespace {

double sup_diff(const FieldPair& a, const FieldPair& b) {
  return std::max((a.u - b.u).cwiseAbs().maxCoeff(), (a.v - b.v).cwiseAbs().maxCoeff());
}

// Largest amount by which `next` exceeds `prev` (sign = +1) or falls below it (sign = -1).
double ordering_violation(const FieldPair& prev, const FieldPair& next, double sign) {
  const double du = (sign * (next.u - prev.u)).maxCoeff();
  const double dv = (sign * (next.v - prev.v)).maxCoeff();
  return std::max({0.0, du, dv});
}

PeriodicState make_state(const FixedDomain& domain, std::vector<FieldPair> slices, FieldPair post, double tol) {
  PeriodicState s;
  s.grid = domain.grid();
  const int count = static_cast<int>(slices.size()) - 1;
  for (int k = 0; k <= count; ++k) s.times.push_back(domain.problem().params.tau * k / count);
  s.zero = true;
  for (const auto& f : slices) s.zero = s.zero && f.sup() < tol;
  s.slices = std::move(slices);
  s.post_pulse = std::move(post);
  return s;
}

// sign = -1: iterates expected non-increasing; +1: non-decreasing.
MonotoneRun iterate(FixedDomain& domain, FieldPair start, double sign, const PeriodicOptions& o) {
  MonotoneRun run;
  FieldPair post;
  std::vector<FieldPair> prev = domain.period_slices(start, o.slices, &post);
  for (int j = 1; j <= o.max_iterations; ++j) {
    FieldPair next_post;
    std::vector<FieldPair> next = domain.period_slices(prev.back(), o.slices, &next_post);
    // Period j+1 compared slice by slice with period j.
    for (std::size_t k = 0; k < next.size(); ++k) {
      const double viol = sign > 0 ? ordering_violation(prev[k], next[k], -1.0)
                                   : ordering_violation(prev[k], next[k], +1.0);
      run.worst_violation = std::max(run.worst_violation, viol);
    }
    const double change = sup_diff(prev.front(), next.front());
    // Distance to the limit under geometric contraction at the observed ratio.
    const double q = run.last_change > 0.0 ? std::min(change / run.last_change, 1.0 - 1e-9) : 1.0 - 1e-9;
    const double remaining = change * q / (1.0 - q);
    run.last_change = change;
    run.iterations = j;
    bool collapsed = true;
    for (const auto& f : next) collapsed = collapsed && f.sup() < o.tol;
    prev = std::move(next);
    post = std::move(next_post);
    if ((j > 1 && change < o.tol && remaining < o.tol) || collapsed) {
      run.converged = true;
      break;
    }
  }
  run.limit = make_state(domain, std::move(prev), std::move(post), o.tol);
  return run;
}

// Principal mode of the clamped linearisation, interpolated onto the grid.
FieldPair eigen_profile(const FixedDomain& domain, const PeriodicOptions& o) {
  const auto& pr = domain.problem();
  SpectralOptions so;
  so.endpoints = EndpointMode::Clamped;
  so.keep_mode = true;
  const auto rep = lambda1(pr.params, pr.growth, pr.pulse, pr.kernel, pr.interval, o.eigen_nodes, so);
  const double scale = std::max(rep.u_mode.maxCoeff(), rep.v_mode.maxCoeff());
  FieldPair f = domain.zero();
  const auto& grid = domain.grid();
  const auto& act = domain.active();
  const Index n = rep.nodes.size();
  auto interp = [&](const Eigen::VectorXd& mode, double x) {
    // Clamped mode: zero at both endpoints, rep.nodes strictly inside.
    const double pos = (x - pr.interval.lo) / rep.dx;
    const auto i = static_cast<Index>(std::floor(pos));
    const double t = pos - static_cast<double>(i);
    const double left = (i >= 1 && i <= n) ? mode(i - 1) : 0.0;
    const double right = (i + 1 >= 1 && i + 1 <= n) ? mode(i) : 0.0;
    return std::max(0.0, (1.0 - t) * left + t * right);
  };
  for (Index i = act.first; i <= act.last; ++i) {
    f.u(i) = interp(rep.u_mode, grid.x(i)) / scale;
    f.v(i) = interp(rep.v_mode, grid.x(i)) / scale;
  }
  return f;
}

}  // namespace

PeriodicResult periodic_state(const FixedProblem& problem, const PeriodicOptions& o) {
  FixedDomain domain(problem);
  PeriodicResult result;

  const auto bounds = compute_bounds(problem.params, problem.growth, o.u0_sup, o.v0_sup);
  result.upper = iterate(domain, domain.constant(bounds.c1_bound, bounds.c2_bound), -1.0, o);

  // Halve epsilon until one period map lifts eps*phi pointwise.
  const FieldPair phi = eigen_profile(domain, o);
  FieldPair lower_start = domain.zero();
  double eps = 1.0;
  for (int attempt = 0; attempt < 40; ++attempt, eps *= 0.5) {
    FieldPair trial{eps * phi.u, eps * phi.v};
    const FieldPair image = domain.period_map(trial);
    if (ordering_violation(trial, image, -1.0) == 0.0) {
      lower_start = std::move(trial);
      result.lower_scale = eps;
      break;
    }
  }
  if (result.lower_scale > 0.0) {
    result.lower = iterate(domain, std::move(lower_start), +1.0, o);
  } else {
    FieldPair post = domain.zero();
    std::vector<FieldPair> slices(o.slices + 1, domain.zero());
    result.lower.converged = true;
    result.lower.limit = make_state(domain, std::move(slices), std::move(post), o.tol);
  }

  double gap = 0.0;
  for (std::size_t k = 0; k < result.upper.limit.slices.size(); ++k)
    gap = std::max(gap, sup_diff(result.upper.limit.slices[k], result.lower.limit.slices[k]));
  result.gap = gap;
  result.converged = result.upper.converged && result.lower.converged;
  result.zero = result.upper.limit.zero && result.lower.limit.zero;
  return result;
}

LimitOdeResult solve_limit_ode(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse, double T,
                               Eigen::Vector2d y) {
  LimitOdeResult out;
  constexpr int steps = 2000;
  const double dt = p.tau / steps;
  auto rhs = [&](const Eigen::Vector2d& s) {
    return Eigen::Vector2d(p.a12 * s(1) - p.a11 * s(0), growth(s(0)) - p.a22 * s(1));
  };
  const auto periods = static_cast<int>(std::floor(T / p.tau + 1e-12));
  out.times.push_back(0.0);
  out.states.push_back(y);
  for (int k = 0; k < periods; ++k) {
    y(0) = pulse(y(0));
    for (int s = 0; s < steps; ++s) {
      const Eigen::Vector2d k1 = rhs(y);
      const Eigen::Vector2d k2 = rhs(y + 0.5 * dt * k1);
      const Eigen::Vector2d k3 = rhs(y + 0.5 * dt * k2);
      const Eigen::Vector2d k4 = rhs(y + dt * k3);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.times.push_back((k + 1) * p.tau);
    out.states.push_back(y);
  }
  if (out.states.size() >= 2)
    out.last_change = (out.states.back() - out.states[out.states.size() - 2]).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace pulsefront
