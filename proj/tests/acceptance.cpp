// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pulsefront/error.hpp"
#include "pulsefront/fixed_domain.hpp"
#include "pulsefront/free_boundary.hpp"
#include "pulsefront/spectral.hpp"

using namespace pulsefront;

namespace {

const ModelParams kExample{0.10, 0.10, 0.35, 0.11, 0.10, 20.0, 200.0, 1.0, 2.0};
const GrowthSpec kGrowth = GrowthSpec::saturating(0.5, 10.0);
const GrowthSpec kSpreading = GrowthSpec::saturating(0.5, 1.0);
const PulseSpec kIdentity = PulseSpec::identity();
const PulseSpec kBevertonHolt = PulseSpec::beverton_holt(0.1, 10.0);

const Kernel& bump() {
  static const Kernel k = build_kernel(KernelSpec::bump(3.0));
  return k;
}

// Nodes giving spacing close to dx on (-l, l), at least 101.
Index nodes_for(double l, double dx = 0.05) {
  return std::max<Index>(101, static_cast<Index>(std::ceil(2.0 * l / dx)) + 1);
}

double lam(double l, double z, Index n) {
  return lambda1(kExample, kGrowth, z, bump(), {-l, l}, n).lambda1;
}

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!ok) detail += " [failed: " + what + "]";
  }
  void note(const char* fmt, double v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), fmt, v);
    detail += buf;
  }
};

using Criterion = std::function<Line()>;

Line eigenvalue_at_7_8() {
  Line r;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = lambda1(kExample, kGrowth, 1.0, bump(), {-7.8, 7.8}, 401);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.note("lambda1(1,(-7.8,7.8)) = %.6f", rep.lambda1);
  r.note(" at n = %.0f", static_cast<double>(rep.n_nodes));
  r.note(", %.2f s", secs);
  r.require(std::abs(rep.lambda1 - 0.08) <= 0.02, "0.08 +- 0.02");
  r.require(rep.n_nodes >= 400, "n >= 400");
  r.require(secs < 30.0, "runtime < 30 s");
  return r;
}

Line closed_forms() {
  Line r;
  const double mu = mu1_ode(kExample, kGrowth, 1.0);
  const double mu_exact = (0.45 - std::sqrt(0.0845)) / 2.0;
  const double eta = eta1_closed_form(kExample, kGrowth, 1.0);
  const double eta_mono = eta1_monodromy(kExample, kGrowth, 1.0);
  r.note("mu1 = %.10f", mu);
  r.note(" (|diff| %.1e)", std::abs(mu - mu_exact));
  r.note(", eta1 = %.10f", eta);
  r.note(" vs monodromy |diff| %.1e", std::abs(eta - eta_mono));
  r.note(", vs 0.270345 |diff| %.1e", std::abs(eta - 0.270345));
  r.require(std::abs(mu - mu_exact) <= 1e-10, "mu1 to 1e-10");
  r.require(std::abs(eta - eta_mono) <= 1e-10, "eta1 closed form vs monodromy to 1e-10");
  r.require(std::abs(eta - 0.270345) <= 1e-6, "eta1 matches the six-digit value");
  return r;
}

Line limit_law() {
  Line r;
  for (double z : {1.0, 0.01}) {
    const double mu = mu1_ode(kExample, kGrowth, z);
    double worst = 1e300;
    double at50 = 0.0;
    for (double l : {2.0, 4.0, 8.0, 16.0, 50.0}) {
      // Spacing 0.05 up to l = 16, 0.1 at l = 50 (matrix-free route).
      const double v = lam(l, z, nodes_for(l, l > 20.0 ? 0.1 : 0.05));
      worst = std::min(worst, v - mu);
      if (l == 50.0) at50 = v;
    }
    r.note(" z=%g:", z);
    r.note(" lambda1(50)-mu1 = %.2e,", at50 - mu);
    r.note(" min lambda1(l)-mu1 = %.2e;", worst);
    r.require(std::abs(at50 - mu) <= 5e-3, "|lambda1(50) - mu1| <= 5e-3");
    r.require(worst >= -1e-6, "lambda1(l) >= mu1 - 1e-6");
  }
  return r;
}

Line monotonicity() {
  Line r;
  const double zs[] = {0.01, 0.1, 0.5, 1.0};
  double lip = -1e300;
  for (int i = 0; i + 1 < 4; ++i) {
    const double a = lam(4.0, zs[i], nodes_for(4.0)), b = lam(4.0, zs[i + 1], nodes_for(4.0));
    r.require(b < a, "strict decrease in z");
    lip = std::max(lip, std::abs(a - b) - std::abs(std::log(zs[i + 1]) - std::log(zs[i])));
  }
  const double ls[] = {2.0, 4.0, 8.0, 16.0};
  double min_step = 1e300;
  for (int i = 0; i + 1 < 4; ++i) {
    const double a = lam(ls[i], 1.0, nodes_for(ls[i])), b = lam(ls[i + 1], 1.0, nodes_for(ls[i + 1]));
    r.require(b < a, "strict decrease in l");
    min_step = std::min(min_step, a - b);
  }
  r.note("smallest decrease in l = %.2e", min_step);
  r.note(", max(|dlambda| - |dln z|) = %.3f", lip);
  r.require(lip <= 1e-6, "Lipschitz bound in ln z");
  return r;
}

Line two_routes() {
  Line r;
  double worst = 0.0;
  for (double z : {1.0, 0.5, 0.01}) {
    const auto a = lambda1(kExample, kGrowth, z, bump(), {-4.0, 4.0}, 100);
    const auto b = lambda1_transformed(kExample, kGrowth, z, bump(), {-4.0, 4.0}, 100);
    worst = std::max(worst, std::abs(a.lambda1 - b.lambda1));
  }
  r.note("max |lambda1 - lambda1_transformed| = %.2e", worst);
  r.require(worst < 1e-6, "< 1e-6");
  return r;
}

Line well_posedness() {
  Line r;
  const auto b = compute_bounds(kExample, kGrowth, 3.0, 1.0);
  double max_u = 0.0, max_v = 0.0, min_uv = 1e300;
  for (const PulseSpec& pulse : {kIdentity, kBevertonHolt}) {
    const auto traj = simulate(kExample, kGrowth, pulse, bump(), 24.0);
    r.require(traj.rows.size() == 241, "241 outputs");
    for (std::size_t i = 0; i < traj.rows.size(); ++i) {
      const auto& row = traj.rows[i];
      max_u = std::max(max_u, row.sup_u);
      max_v = std::max(max_v, row.sup_v);
      min_uv = std::min({min_uv, row.min_u, row.min_v});
      if (i > 0) {
        const auto& prev = traj.rows[i - 1].front;
        if (!(row.front.h > prev.h && row.front.g < prev.g)) r.require(false, "strictly monotone fronts");
      }
    }
  }
  r.note("max u = %.6f", max_u);
  r.note(", max v = %.6f", max_v);
  r.note(" (C2 = %.6f)", b.c2_bound);
  r.note(", min interior density = %.3e", min_uv);
  r.require(max_u <= 3.0, "u <= 3");
  r.require(max_v <= b.c2_bound && max_v <= 1.15385, "v <= 1.15385");
  r.require(min_uv > 0.0, "densities positive inside the fronts");
  return r;
}

Line pulse_comparison() {
  Line r;
  SimulationOptions o;
  for (int k = 0; k <= 240; ++k) o.snapshot_times.push_back(k / 10.0);
  const auto plain = simulate(kExample, kGrowth, kIdentity, bump(), 24.0, o);
  const auto pulsed = simulate(kExample, kGrowth, kBevertonHolt, bump(), 24.0, o);
  r.require(plain.snapshots.size() == pulsed.snapshots.size() && plain.snapshots.size() == 241, "matched outputs");
  double worst = 0.0;
  for (std::size_t s = 0; s < plain.snapshots.size(); ++s) {
    const auto& a = plain.snapshots[s];
    const auto& b = pulsed.snapshots[s];
    r.require(b.x(0) >= a.x(0) && b.x(b.x.size() - 1) <= a.x(a.x.size() - 1), "pulsed fronts inside");
    // Same node lattice; skip the front entries.
    Index i = 1;
    for (Index j = 1; j + 1 < b.x.size(); ++j) {
      while (i + 1 < a.x.size() && a.x(i) < b.x(j) - 1e-9) ++i;
      if (i + 1 >= a.x.size() || std::abs(a.x(i) - b.x(j)) > 1e-9) {
        r.require(false, "node lattice alignment");
        break;
      }
      worst = std::max({worst, b.u(j) - a.u(i), b.v(j) - a.v(i)});
    }
  }
  const double hp = pulsed.rows.back().front.h, hi = plain.rows.back().front.h;
  r.note("max(pulsed - identity) = %.2e", worst);
  r.note(", h_pulsed(24) = %.4f", hp);
  r.note(", h_identity(24) = %.4f", hi);
  r.require(worst <= 0.0, "pointwise domination");
  r.require(hp < hi, "h_pulsed(24) < h_identity(24)");
  return r;
}

Line dichotomy() {
  Line r;
  PeriodicOptions o;
  o.slices = 20;
  const FixedProblem spread{kExample, kSpreading, kIdentity, bump(), {-20.0, 20.0}, 0.1, 1.0};
  const auto s = periodic_state(spread, o);
  r.note("spreading l=20: gap = %.2e", s.gap);
  r.note(", sup = %.4f", s.state().slices.front().sup());
  r.note(", iterations %.0f", s.upper.iterations);
  r.note("/%.0f", s.lower.iterations);
  r.require(s.converged, "spreading iterations converge");
  r.require(!s.zero && s.lower_scale > 0.0, "positive periodic state");
  r.require(s.gap <= 1e-6, "upper and lower limits within 1e-6");
  double viol = std::max(s.upper.worst_violation, s.lower.worst_violation);
  for (const PulseSpec& pulse : {kIdentity, kBevertonHolt}) {
    const FixedProblem ex{kExample, kGrowth, pulse, bump(), {-7.8, 7.8}, 0.1, 1.0};
    const auto e = periodic_state(ex, o);
    r.require(e.converged && e.zero, "base example collapses to zero");
    viol = std::max({viol, e.upper.worst_violation, e.lower.worst_violation});
  }
  r.note("; base example zero under both pulses; worst ordering violation = %.1e", viol);
  r.require(viol == 0.0, "iterate monotonicity at every step");
  return r;
}

Line classifier() {
  Line r;
  r.require(classify(kExample, kGrowth, kIdentity, bump()).verdict == Verdict::Vanishing, "identity pulse vanishes");
  r.require(classify(kExample, kGrowth, kBevertonHolt, bump()).verdict == Verdict::Vanishing, "pulsed vanishes");
  ModelParams wide = kExample;
  wide.h0 = 20.0;
  r.require(classify(wide, kSpreading, kIdentity, bump()).verdict == Verdict::Spreading, "large h0 spreads");

  // lambda1(2) < 0 for this preset, so the threshold case is taken at h0 = 0.5.
  ModelParams narrow = kExample;
  narrow.h0 = 2.0;
  const auto at2 = classify(narrow, kSpreading, kIdentity, bump());
  r.note("lambda1(h0=2) = %.4f", at2.lambda1_h0.value_or(NAN));
  narrow.h0 = 0.5;
  ClassifyOptions co;
  co.find_mu_star = true;
  co.mu_star.lo = 0.003;
  co.mu_star.hi = 0.006;
  co.mu_star.horizon = 8000;
  try {
    const auto c = classify(narrow, kSpreading, kIdentity, bump(), co);
    r.note(", lambda1(h0=0.5) = %.4f", c.lambda1_h0.value_or(NAN));
    r.require(c.verdict == Verdict::ThresholdRegime, "h0 = 0.5 is in the threshold regime");
    r.require(c.mu_star.has_value(), "mu* found");
    if (c.mu_star) {
      MuStarOptions po = co.mu_star;
      po.thresholds.critical_length = c.critical_length;
      const auto below = probe_outcome(narrow, kSpreading, kIdentity, bump(), 0.95 * *c.mu_star, po);
      const auto above = probe_outcome(narrow, kSpreading, kIdentity, bump(), 1.05 * *c.mu_star, po);
      r.note(", mu* = %.5f", *c.mu_star);
      r.detail += ", 0.95 mu* -> " + to_string(below.verdict) + ", 1.05 mu* -> " + to_string(above.verdict);
      r.require(below.verdict == Verdict::Vanishing && above.verdict == Verdict::Spreading, "+-5% probes flip");
    }
  } catch (const Error& e) {
    r.require(false, e.what());
  }
  return r;
}

Line convergence() {
  Line r;
  const double coarse = lam(7.8, 1.0, 201), fine = lam(7.8, 1.0, 401);
  SimulationOptions a;
  SimulationOptions b;
  b.dx = a.dx / 2.0;
  b.dt_scale = 0.5;
  const auto ta = simulate(kExample, kGrowth, kIdentity, bump(), 10.0, a);
  const auto tb = simulate(kExample, kGrowth, kIdentity, bump(), 10.0, b);
  r.require(std::abs(tb.dt - ta.dt / 2.0) < 1e-15, "dt halved");
  const double ha = ta.rows.back().front.h, hb = tb.rows.back().front.h;
  r.note("|dlambda1| = %.2e", std::abs(coarse - fine));
  r.note(", h(10) = %.5f", ha);
  r.note(" -> %.5f", hb);
  r.note(" (%.3f%%)", 100.0 * std::abs(ha - hb) / ha);
  r.require(std::abs(coarse - fine) < 1e-3, "lambda1 change < 1e-3");
  r.require(std::abs(ha - hb) < 0.01 * ha, "h(10) change < 1%");
  return r;
}

Line irreproducible_value() {
  Line r;
  const double v = lam(9.75, 1.0, nodes_for(9.75));
  const double mu = mu1_ode(kExample, kGrowth, 1.0);
  r.note("lambda1(9.75) = %.6f", v);
  r.note(" (lower bound mu1 = %.6f; a negative value such as -0.22 is ruled out)", mu);
  r.require(v >= 0.079 && v <= 0.15, "lambda1(9.75) in [0.079, 0.15]");
  r.require(v >= mu - 1e-6, "above mu1");
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Criterion>> criteria = {
      {"eigenvalue on (-7.8, 7.8)", eigenvalue_at_7_8},
      {"closed-form agreement", closed_forms},
      {"whole-line limit", limit_law},
      {"monotonicity in z and l", monotonicity},
      {"two-route consistency", two_routes},
      {"well-posedness bounds", well_posedness},
      {"pulse comparison", pulse_comparison},
      {"fixed-domain dichotomy", dichotomy},
      {"classifier and threshold capacity", classifier},
      {"discretization convergence", convergence},
      {"eigenvalue on (-9.75, 9.75)", irreproducible_value},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Line line;
    try {
      line = criteria[i].second();
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s (%.1f s)\n", line.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                line.detail.c_str(), secs);
    std::fflush(stdout);
    failures += line.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
