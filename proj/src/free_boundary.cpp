#include "pulsefront/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pulsefront/error.hpp"

namespace pulsefront {

std::pair<double, double> boundary_speeds(const Grid& grid, const FieldPair& f, Interval fronts, const Kernel& kernel,
                                          double mu1, double mu2) {
  const ActiveNodes act = active_nodes(grid, fronts);
  if (act.empty()) return {0.0, 0.0};
  const double R = kernel.radius();
  double right = 0.0;
  double left = 0.0;
  for (Index i = act.first; i <= act.last; ++i) {
    const double mass = grid.dx() * act.weight(i) * (mu1 * f.u(i) + mu2 * f.v(i));
    if (mass == 0.0) continue;
    const double x = grid.x(i);
    if (fronts.hi - x < R) right += mass * kernel.tail_mass(fronts.hi - x);
    if (x - fronts.lo < R) left += mass * kernel.tail_mass(x - fronts.lo);
  }
  return {-left, right};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Vanishing: return "Vanishing";
    case Verdict::Spreading: return "Spreading";
    case Verdict::ThresholdRegime: return "ThresholdRegime";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

namespace {

OutputRow make_row(double t, const Grid& grid, const FieldPair& f, const FrontState& front) {
  OutputRow row;
  row.t = t;
  row.front = front;
  const ActiveNodes act = active_nodes(grid, {front.g, front.h});
  if (!act.empty()) {
    const Index n = act.count();
    row.sup_u = f.u.segment(act.first, n).maxCoeff();
    row.sup_v = f.v.segment(act.first, n).maxCoeff();
    row.min_u = f.u.segment(act.first, n).minCoeff();
    row.min_v = f.v.segment(act.first, n).minCoeff();
  }
  return row;
}

Snapshot make_snapshot(double t, const Grid& grid, const FieldPair& f, const FrontState& front) {
  const ActiveNodes act = active_nodes(grid, {front.g, front.h});
  const Index n = act.count();
  Snapshot s;
  s.t = t;
  s.x.resize(n + 2);
  s.u = Eigen::VectorXd::Zero(n + 2);
  s.v = Eigen::VectorXd::Zero(n + 2);
  s.x(0) = front.g;
  s.x(n + 1) = front.h;
  for (Index j = 0; j < n; ++j) {
    s.x(j + 1) = grid.x(act.first + j);
    s.u(j + 1) = f.u(act.first + j);
    s.v(j + 1) = f.v(act.first + j);
  }
  return s;
}

Eigen::VectorXd pad(const Eigen::VectorXd& a, Index left, Index right) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + left + right);
  out.segment(left, a.size()) = a;
  return out;
}

}  // namespace

Trajectory simulate(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse, const Kernel& kernel,
                    double T, const SimulationOptions& o) {
  Trajectory traj;
  const double R = kernel.radius();
  const double half = p.h0 + 10.0 * R;
  if (half > o.window_cap) throw WindowCapExceeded("initial window exceeds the configured cap");
  Grid grid = Grid::covering(-half, half, o.dx);
  const Index steps = steps_per_period(p, growth, o.dt_scale);
  const double dt = p.tau / static_cast<double>(steps);
  traj.dt = dt;
  traj.dx = grid.dx();
  traj.steps_per_period = steps;
  if (!(T > 0.0)) return traj;

  FrontState front{-p.h0, p.h0, 0.0, 0.0};
  FieldPair f{Eigen::VectorXd::Zero(grid.size()), Eigen::VectorXd::Zero(grid.size())};
  {
    const ActiveNodes act = active_nodes(grid, {front.g, front.h});
    for (Index i = act.first; i <= act.last; ++i) {
      const double c = std::cos(std::numbers::pi * grid.x(i) / (2.0 * p.h0));
      f.u(i) = o.u0_amplitude * c;
      f.v(i) = o.v0_amplitude * c;
    }
  }
  EulerStepper stepper(p, growth, kernel, grid.dx());

  const auto total = static_cast<Index>(std::llround(T / dt));
  const int per = std::max(1, o.outputs_per_period);
  auto is_output = [&](Index n) {
    const Index r = n % steps;
    if (r == 0) return true;
    for (int j = 1; j < per; ++j)
      if (r == static_cast<Index>(std::llround(static_cast<double>(j) * steps / per))) return true;
    return false;
  };
  std::vector<Index> snap_steps;
  for (double ts : o.snapshot_times) {
    if (ts < 0.0 || ts > T + 0.5 * dt) continue;
    snap_steps.push_back(static_cast<Index>(std::llround(ts / dt)));
  }
  std::sort(snap_steps.begin(), snap_steps.end());
  std::size_t next_snap = 0;

  auto record = [&](Index n) {
    const double t = static_cast<double>(n) * dt;
    if (is_output(n)) {
      const auto [gp, hp] = boundary_speeds(grid, f, {front.g, front.h}, kernel, p.mu1, p.mu2);
      front.gprime = gp;
      front.hprime = hp;
      traj.rows.push_back(make_row(t, grid, f, front));
    }
    while (next_snap < snap_steps.size() && snap_steps[next_snap] == n) {
      traj.snapshots.push_back(make_snapshot(t, grid, f, front));
      ++next_snap;
    }
    if (n % steps == 0) {
      const OutputRow row = make_row(t, grid, f, front);
      traj.periods.push_back({static_cast<int>(n / steps), t, front.g, front.h, row.sup_u, row.sup_v});
      if (n > 0 && o.stop && o.stop(traj.periods)) return true;
    }
    return false;
  };

  if (record(0)) {
    traj.stopped_early = true;
    return traj;
  }
  for (Index n = 0; n < total; ++n) {
    if (n % steps == 0) apply_pulse_inplace(f, pulse);
    const auto [gp, hp] = boundary_speeds(grid, f, {front.g, front.h}, kernel, p.mu1, p.mu2);
    stepper.step(f, active_nodes(grid, {front.g, front.h}), dt);
    front.g += dt * gp;
    front.h += dt * hp;
    front.gprime = gp;
    front.hprime = hp;
    if (!std::isfinite(front.g) || !std::isfinite(front.h)) {
      std::ostringstream os;
      os << "front position became non-finite (dt = " << dt << ")";
      throw InstabilityError(os.str());
    }

    const bool grow_left = front.g < grid.xmin() + R;
    const bool grow_right = front.h > grid.xmax() - R;
    if (grow_left || grow_right) {
      const auto block = static_cast<Index>(std::ceil(5.0 * R / grid.dx()));
      const Index left = grow_left ? block : 0;
      const Index right = grow_right ? block : 0;
      Grid wider = grid.extended(left, right);
      if (std::max(-wider.xmin(), wider.xmax()) > o.window_cap) {
        std::ostringstream os;
        os << "grid window would exceed the cap " << o.window_cap << " at t = " << (n + 1) * dt;
        throw WindowCapExceeded(os.str());
      }
      f.u = pad(f.u, left, right);
      f.v = pad(f.v, left, right);
      grid = wider;
    }

    if (record(n + 1)) {
      traj.stopped_early = true;
      break;
    }
  }
  return traj;
}

Outcome detect_outcome(const Trajectory& trajectory, int horizon, const OutcomeThresholds& th) {
  return detect_outcome(trajectory.periods, horizon, th);
}

Outcome detect_outcome(const std::vector<PeriodRecord>& recs, int horizon, const OutcomeThresholds& th) {
  Outcome out;
  if (recs.empty()) {
    out.reason = "no periods recorded";
    return out;
  }
  const int K = static_cast<int>(recs.size()) - 1;
  out.periods = K;
  auto sup = [](const PeriodRecord& r) { return std::max(r.sup_u, r.sup_v); };
  auto width = [](const PeriodRecord& r) { return r.h - r.g; };

  if (sup(recs.back()) == 0.0) {
    out.verdict = Verdict::Vanishing;
    out.reason = "densities identically zero";
    return out;
  }
  if (th.critical_length) {
    for (const auto& r : recs) {
      if (width(r) > 2.0 * *th.critical_length) {
        out.verdict = Verdict::Spreading;
        std::ostringstream os;
        os << "front gap " << width(r) << " exceeds twice the critical length " << *th.critical_length << " at t = "
           << r.t;
        out.reason = os.str();
        return out;
      }
    }
  }
  if (K < 2) {
    out.reason = "fewer than two periods";
    return out;
  }
  out.last_increment = width(recs[K]) - width(recs[K - 1]);

  const int window = std::max(2, std::min(horizon, K) / 2);
  const int first = K - window;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = first; k <= K; ++k) {
    const double y = std::log(sup(recs[k]));
    sx += k;
    sy += y;
    sxx += static_cast<double>(k) * k;
    sxy += k * y;
  }
  const double m = window + 1;
  out.log_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  if (out.log_slope < th.decay_slope && out.last_increment < th.vanish_increment) {
    out.verdict = Verdict::Vanishing;
    std::ostringstream os;
    os << "sup-norm decays at log-rate " << out.log_slope << " per period and the front gap grew by "
       << out.last_increment << " in the last period";
    out.reason = os.str();
    return out;
  }
  if (K >= horizon) {
    bool spreading = true;
    for (int k = first + 1; k <= K; ++k)
      spreading = spreading && width(recs[k]) - width(recs[k - 1]) > th.spread_increment &&
                  sup(recs[k]) > th.spread_sup;
    if (spreading) {
      out.verdict = Verdict::Spreading;
      out.reason = "front increments and sup-norm stay above their floors over the last half of the horizon";
      return out;
    }
  }
  out.reason = "no criterion met within the horizon";
  return out;
}

namespace {

// l* for the given rates, or nothing when mu1 >= 0 or no sign change is found.
std::optional<double> auto_critical_length(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse,
                                           const Kernel& kernel) {
  const double z = pulse.slope_at_zero();
  if (mu1_ode(p, growth, z) >= 0.0) return std::nullopt;
  LstarOptions lo;
  auto lam = [&](double l) { return lambda1(p, growth, z, kernel, {-l, l}, lo.n_nodes, lo.spectral).lambda1; };
  double hi = 1.0;
  while (lam(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > 1024.0) return std::nullopt;
  }
  double low = hi / 2.0;
  while (lam(low) <= 0.0) {
    low /= 2.0;
    if (low < 1e-6) return std::nullopt;
  }
  try {
    return find_lstar(p, growth, pulse, kernel, low, hi, lo);
  } catch (const NoRoot&) {
    return std::nullopt;
  }
}

}  // namespace

Outcome probe_outcome(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                      const Kernel& kernel, double mu, const MuStarOptions& o) {
  ModelParams p = params;
  p.mu1 = mu;
  p.mu2 = o.ratio * mu;
  OutcomeThresholds th = o.thresholds;
  if (o.use_critical_length && !th.critical_length) th.critical_length = auto_critical_length(p, growth, pulse, kernel);
  SimulationOptions sim = o.simulation;
  sim.outputs_per_period = 1;
  sim.snapshot_times.clear();
  sim.stop = [&](const std::vector<PeriodRecord>& recs) {
    const Outcome out = detect_outcome(recs, o.horizon, th);
    return out.verdict != Verdict::Indeterminate || static_cast<int>(recs.size()) - 1 >= o.horizon;
  };
  const Trajectory traj = simulate(p, growth, pulse, kernel, o.horizon * p.tau, sim);
  return detect_outcome(traj, o.horizon, th);
}

MuStarResult find_mu_star(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                          const Kernel& kernel, const MuStarOptions& options) {
  MuStarOptions o = options;
  if (o.use_critical_length && !o.thresholds.critical_length)
    o.thresholds.critical_length = auto_critical_length(params, growth, pulse, kernel);
  if (!(o.lo > 0.0) || !(o.hi > o.lo)) throw InvalidBracket("mu bracket must satisfy 0 < lo < hi");

  MuStarResult res;
  auto probe = [&](double mu) {
    Outcome out = probe_outcome(params, growth, pulse, kernel, mu, o);
    res.probes.push_back({mu, out});
    if (out.verdict == Verdict::Indeterminate) {
      std::ostringstream os;
      os << "probe mu1 = " << mu << " undecided after " << out.periods << " periods: " << out.reason;
      throw IndeterminateOutcome(os.str(), mu);
    }
    return out.verdict;
  };

  double lo = o.lo;
  double hi = o.hi;
  if (probe(lo) != Verdict::Vanishing) throw InvalidBracket("lower end of the mu bracket does not vanish");
  if (probe(hi) != Verdict::Spreading) throw InvalidBracket("upper end of the mu bracket does not spread");
  while (hi / lo > 1.0 + o.rel_width) {
    const double mid = std::sqrt(lo * hi);
    (probe(mid) == Verdict::Vanishing ? lo : hi) = mid;
  }
  res.lo = lo;
  res.hi = hi;
  res.mu_star = std::sqrt(lo * hi);
  return res;
}

Classification classify(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse, const Kernel& kernel,
                        const ClassifyOptions& o) {
  Classification c;
  const double z = pulse.slope_at_zero();
  c.mu1 = mu1_ode(p, growth, z);
  auto note = [&](std::string key, double value) {
    std::ostringstream os;
    os.precision(10);
    os << value;
    c.evidence.emplace_back(std::move(key), os.str());
  };
  note("lambda1_infinity", c.mu1);
  note("pulse_slope", z);

  if (c.mu1 > o.zero_band) {
    c.verdict = Verdict::Vanishing;
    c.evidence.emplace_back("rule", "lambda1 on the whole line is positive: extinction");
    return c;
  }
  if (std::abs(c.mu1) <= o.zero_band) {
    c.verdict = Verdict::Vanishing;
    c.evidence.emplace_back("rule", "lambda1 on the whole line is zero: extinction");
    c.evidence.emplace_back("caveat", "the zero case is only proved under a bounded front gap");
    return c;
  }

  const auto n = std::clamp<Index>(static_cast<Index>(std::ceil(2.0 * p.h0 / o.eigen_dx)) + 1, o.min_nodes,
                                   o.max_nodes);
  const EigenReport rep = lambda1(p, growth, z, kernel, {-p.h0, p.h0}, n);
  c.lambda1_h0 = rep.lambda1;
  note("lambda1_h0", rep.lambda1);
  note("lambda1_h0_nodes", static_cast<double>(n));
  if (rep.lambda1 <= 0.0) {
    c.verdict = Verdict::Spreading;
    c.evidence.emplace_back("rule", "lambda1 on the initial interval is non-positive: spreading");
    return c;
  }

  c.verdict = Verdict::ThresholdRegime;
  c.evidence.emplace_back("rule", "lambda1 negative on the whole line but positive on the initial interval");
  c.critical_length = auto_critical_length(p, growth, pulse, kernel);
  if (c.critical_length) note("critical_length", *c.critical_length);
  if (o.find_mu_star) {
    MuStarOptions mo = o.mu_star;
    mo.thresholds.critical_length = c.critical_length;
    const MuStarResult ms = find_mu_star(p, growth, pulse, kernel, mo);
    c.mu_star = ms.mu_star;
    note("mu_star", ms.mu_star);
    note("mu_star_lo", ms.lo);
    note("mu_star_hi", ms.hi);
  }
  return c;
}

}  // namespace pulsefront
