#include "pulsefront/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pulsefront/error.hpp"

namespace pulsefront {

GrowthSpec GrowthSpec::saturating(double c, double b) {
  GrowthSpec g;
  g.form_ = Form::Saturating;
  g.c_ = c;
  g.b_ = b;
  g.slope0_ = c / b;
  std::ostringstream os;
  os << c << "*u/(" << b << "+u)";
  g.label_ = os.str();
  return g;
}

GrowthSpec GrowthSpec::custom(double slope_at_zero, std::function<double(double)> eval, std::string label) {
  GrowthSpec g;
  g.form_ = Form::Custom;
  g.slope0_ = slope_at_zero;
  g.eval_ = std::move(eval);
  g.label_ = std::move(label);
  return g;
}

GrowthSpec GrowthSpec::scaled(double factor) const {
  if (form_ == Form::Saturating) return saturating(c_ * factor, b_);
  auto inner = eval_;
  return custom(slope0_ * factor, [inner, factor](double u) { return factor * inner(u); }, label_);
}

PulseSpec PulseSpec::identity() { return PulseSpec{}; }

PulseSpec PulseSpec::linear(double c1) {
  PulseSpec p;
  p.form_ = Form::Linear;
  p.p_ = c1;
  return p;
}

PulseSpec PulseSpec::beverton_holt(double c2, double c3) {
  PulseSpec p;
  p.form_ = Form::BevertonHolt;
  p.p_ = c2;
  p.q_ = c3;
  return p;
}

double PulseSpec::slope_at_zero() const noexcept {
  switch (form_) {
    case Form::Identity: return 1.0;
    case Form::Linear: return p_;
    case Form::BevertonHolt: return p_ / q_;
  }
  return 1.0;
}

bool ValidationReport::ok() const { return first_failure() == nullptr; }

const AssumptionCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

bool ValidationReport::passed(const std::string& prefix) const {
  for (const auto& c : checks)
    if (c.name.rfind(prefix, 0) == 0 && !c.passed) return false;
  return true;
}

std::vector<double> assumption_samples() {
  constexpr int count = 200;
  std::vector<double> out(count);
  const double lo = std::log(1e-6);
  const double hi = std::log(1e6);
  for (int i = 0; i < count; ++i) out[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  return out;
}

namespace {

constexpr double kTailProbe = 1e12;

AssumptionCheck pass(std::string name) { return {std::move(name), true, std::nullopt, {}}; }

AssumptionCheck fail(std::string name, double witness, std::string detail) {
  return {std::move(name), false, witness, std::move(detail)};
}

template <typename F>
void check_curve(ValidationReport& report, const std::string& prefix, F&& f, double slope0, bool ratio_bounded) {
  const auto xs = assumption_samples();

  const double f0 = f(0.0);
  report.checks.push_back(f0 == 0.0 ? pass(prefix + ".zero") : fail(prefix + ".zero", 0.0, "value at zero is not zero"));

  AssumptionCheck inc = pass(prefix + ".increasing");
  AssumptionCheck ratio = pass(prefix + ".ratio_decreasing");
  AssumptionCheck bound = pass(prefix + ".ratio_bound");
  double prev_val = f0;
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    const double val = f(x);
    const double r = val / x;
    if (inc.passed && !(val > prev_val)) inc = fail(prefix + ".increasing", x, "not strictly increasing");
    if (ratio_bounded) {
      if (bound.passed && !(r > 0.0 && r <= 1.0)) bound = fail(prefix + ".ratio_bound", x, "ratio outside (0, 1]");
      if (ratio.passed && r > prev_ratio) ratio = fail(prefix + ".ratio_decreasing", x, "ratio increases");
    } else {
      if (ratio.passed && !(r < prev_ratio)) ratio = fail(prefix + ".ratio_decreasing", x, "ratio not strictly decreasing");
    }
    prev_val = val;
    prev_ratio = r;
  }
  report.checks.push_back(inc);
  report.checks.push_back(ratio);
  if (ratio_bounded) report.checks.push_back(bound);

  // The analytic slope must dominate every sampled chord.
  AssumptionCheck slope = pass(prefix + ".slope");
  if (!(slope0 > 0.0) || !std::isfinite(slope0)) {
    slope = fail(prefix + ".slope", 0.0, "slope at zero must be positive and finite");
  } else {
    for (double x : xs) {
      if (f(x) > slope0 * x * (1.0 + 1e-9)) {
        slope = fail(prefix + ".slope", x, "chord slope exceeds the slope at zero");
        break;
      }
    }
  }
  report.checks.push_back(slope);
}

}  // namespace

ValidationReport validate(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse,
                          const KernelSpec& kspec) {
  ValidationReport report;

  const std::pair<const char*, double> fields[] = {{"d1", p.d1},   {"d2", p.d2},   {"a11", p.a11},
                                                   {"a12", p.a12}, {"a22", p.a22}, {"mu1", p.mu1},
                                                   {"mu2", p.mu2}, {"tau", p.tau}, {"h0", p.h0}};
  for (const auto& [name, value] : fields) {
    const std::string key = std::string("params.") + name;
    report.checks.push_back(value > 0.0 && std::isfinite(value) ? pass(key)
                                                               : fail(key, value, "must be strictly positive"));
  }

  check_curve(report, "growth", growth, growth.slope_at_zero(), false);
  {
    const double limit = growth(kTailProbe) / kTailProbe;
    const double cap = p.a11 * p.a22 / p.a12;
    report.checks.push_back(limit < cap ? pass("growth.tail")
                                        : fail("growth.tail", kTailProbe, "G(u)/u does not fall below a11*a22/a12"));
  }

  check_curve(report, "pulse", pulse, pulse.slope_at_zero(), true);
  {
    const double z = pulse.slope_at_zero();
    report.checks.push_back(z > 0.0 && z <= 1.0 ? pass("pulse.z") : fail("pulse.z", z, "H'(0) outside (0, 1]"));
  }

  Kernel kernel;
  try {
    kernel = build_kernel(kspec);
    report.checks.push_back(pass("kernel.build"));
  } catch (const InvalidKernel& e) {
    report.checks.push_back(fail("kernel.build", kspec.radius, e.what()));
    return report;
  }
  const double R = kernel.radius();
  report.checks.push_back(kernel(0.0) > 0.0 ? pass("kernel.origin")
                                            : fail("kernel.origin", 0.0, "J(0) must be positive"));
  AssumptionCheck sym = pass("kernel.symmetric");
  AssumptionCheck nonneg = pass("kernel.nonnegative");
  constexpr int probes = 400;
  for (int i = 0; i <= probes; ++i) {
    const double x = 1.5 * R * i / probes;
    if (sym.passed && kernel(x) != kernel(-x)) sym = fail("kernel.symmetric", x, "J(x) != J(-x)");
    if (nonneg.passed && kernel(x) < 0.0) nonneg = fail("kernel.nonnegative", x, "J(x) < 0");
  }
  report.checks.push_back(sym);
  report.checks.push_back(nonneg);
  report.checks.push_back(kernel(R) == 0.0 && kernel(-R) == 0.0 && kernel(2.0 * R) == 0.0
                              ? pass("kernel.support")
                              : fail("kernel.support", R, "J does not vanish at the radius"));
  const double mass = 2.0 * adaptive_simpson([&](double r) { return kernel(r); }, 0.0, R, 1e-13);
  report.checks.push_back(std::abs(mass - 1.0) <= 1e-10 ? pass("kernel.mass")
                                                        : fail("kernel.mass", mass, "J does not integrate to one"));
  return report;
}

double reproduction_ratio(const ModelParams& p, const GrowthSpec& growth) {
  return p.a12 * growth.slope_at_zero() / (p.a11 * p.a22);
}

SolutionBounds compute_bounds(const ModelParams& p, const GrowthSpec& growth, double u0_sup, double v0_sup) {
  SolutionBounds b;
  const double target = p.a11 * p.a22 / p.a12;
  if (reproduction_ratio(p, growth) > 1.0) {
    auto f = [&](double u) { return growth(u) / u - target; };
    double lo = 1e-12;
    double hi = 1e12;
    if (!(f(lo) > 0.0) || !(f(hi) <= 0.0))
      throw RootNotBracketed("G(u)/u - a11*a22/a12 has no sign change on [1e-12, 1e12]");
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    b.u_star = hi;
  }

  b.c1_bound = std::max({b.u_star, u0_sup, p.a12 / p.a11 * v0_sup});
  b.c2_bound = std::max(v0_sup, growth(b.c1_bound) / p.a22);

  // Round-off can tip the box inequalities by an ulp; nudge outward until both hold.
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 256; ++i) {
    const bool first = -p.a11 * b.c1_bound + p.a12 * b.c2_bound <= 0.0;
    const bool second = -p.a22 * b.c2_bound + growth(b.c1_bound) <= 0.0;
    if (first && second) break;
    if (!first) b.c1_bound = std::nextafter(b.c1_bound, inf);
    if (!second) b.c2_bound = std::nextafter(b.c2_bound, inf);
  }
  return b;
}

}  // namespace pulsefront
