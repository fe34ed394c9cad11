#include "pulsefront/cli.hpp"

#include <algorithm>
#include <cstdlib>

#include "pulsefront/error.hpp"
#include "pulsefront/output.hpp"

namespace pulsefront {

namespace fs = std::filesystem;

namespace {

struct Scenario {
  const ScenarioConfig& config;
  ModelParams params;
  GrowthSpec growth;
  PulseSpec pulse;
  Kernel kernel;
  fs::path dir;
  std::string hash;

  explicit Scenario(const ScenarioConfig& c, fs::path out)
      : config(c), params(c.params), growth(c.growth_spec()), pulse(c.pulse_spec()),
        kernel(build_kernel(c.kernel_spec())), dir(std::move(out)), hash(config_hash(c)) {}

  FileHeader header(std::string stamp) const { return {hash, std::move(stamp)}; }
  Interval interval() const {
    const double l = config.interval_half_length();
    return {-l, l};
  }
};

void check_assumptions(const ScenarioConfig& c) {
  const auto report = validate(c.params, c.growth_spec(), c.pulse_spec(), c.kernel_spec());
  if (const auto* bad = report.first_failure()) {
    std::string msg = "assumption " + bad->name + " fails";
    if (bad->witness) msg += " at " + format_number(*bad->witness);
    if (!bad->detail.empty()) msg += ": " + bad->detail;
    throw ConfigError(msg);
  }
}

std::string run_simulate(const Scenario& s) {
  const auto traj = simulate(s.params, s.growth, s.pulse, s.kernel, s.config.T, s.config.simulation_options());
  const auto header = s.header(trajectory_stamp(traj));
  write_fronts_csv(s.dir / "fronts.csv", traj, header);
  for (const auto& snap : traj.snapshots)
    write_snapshot_csv(s.dir / ("snapshot_" + format_number(snap.t) + ".csv"), snap, header);
  if (traj.rows.empty()) return "simulate: empty trajectory (T = " + format_number(s.config.T) + ")";
  const auto& last = traj.rows.back();
  return "simulate: t = " + format_number(last.t) + " g = " + format_number(last.front.g) +
         " h = " + format_number(last.front.h) + " sup_u = " + format_number(last.sup_u);
}

std::string run_eigen(const Scenario& s) {
  const auto rep = lambda1(s.params, s.growth, s.pulse, s.kernel, s.interval(), s.config.n_nodes,
                           s.config.spectral_options());
  write_eigen_csv(s.dir / "eigen.csv", {SweepRow{s.config.interval_half_length(), rep}}, s.header(eigen_stamp(rep)));
  return "lambda1 = " + format_number(rep.lambda1);
}

std::string run_sweep(const Scenario& s) {
  if (s.config.sweep_values.empty()) throw ConfigError("sweep_values: empty");
  SweepSpec spec;
  spec.axis = s.config.sweep_axis == "z" ? SweepAxis::PulseSlope : SweepAxis::HalfLength;
  spec.values = s.config.sweep_values;
  spec.fixed_z = s.pulse.slope_at_zero();
  spec.fixed_l = s.config.interval_half_length();
  spec.n_nodes = s.config.n_nodes;
  spec.threads = static_cast<unsigned>(std::max(0, s.config.threads));
  spec.require_decreasing = false;
  spec.spectral = s.config.spectral_options();
  const auto rows = sweep_lambda1(s.params, s.growth, s.kernel, spec);
  write_eigen_csv(s.dir / "eigen.csv", rows, s.header(eigen_stamp(rows.front().report)));
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].report.lambda1 < rows[i - 1].report.lambda1;
  return "sweep: " + std::to_string(rows.size()) + " points, lambda1 from " + format_number(rows.front().report.lambda1) +
         " to " + format_number(rows.back().report.lambda1) + (decreasing ? ", strictly decreasing" : ", not monotone");
}

std::string run_steady(const Scenario& s) {
  FixedProblem problem{s.params, s.growth, s.pulse, s.kernel, s.interval(), s.config.dx, s.config.dt_scale};
  PeriodicOptions o;
  o.tol = s.config.tol;
  o.max_iterations = s.config.max_iterations;
  o.slices = s.config.slices;
  o.u0_sup = s.config.u0_amplitude;
  o.v0_sup = s.config.v0_amplitude;
  const auto res = periodic_state(problem, o);
  const std::string stamp = "dx=" + format_number(res.state().grid.dx()) + " steps_per_period=" +
                            std::to_string(steps_per_period(s.params, s.growth, s.config.dt_scale)) +
                            " slices=" + std::to_string(o.slices);
  write_steady_csv(s.dir / "steady_upper.csv", res.upper.limit, s.header(stamp));
  write_steady_csv(s.dir / "steady_lower.csv", res.lower.limit, s.header(stamp));
  std::string kind = res.zero ? "zero" : "positive";
  return "steady: " + kind + " periodic state, gap = " + format_number(res.gap) +
         (res.converged ? "" : " (not converged)");
}

std::vector<std::pair<std::string, std::string>> classification_entries(const Classification& c) {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("verdict", to_string(c.verdict));
  e.emplace_back("mu1", format_number(c.mu1));
  for (const auto& kv : c.evidence) e.push_back(kv);
  return e;
}

std::string run_classify(const Scenario& s) {
  ClassifyOptions o;
  o.mu_star = s.config.mu_star_options();
  const auto c = classify(s.params, s.growth, s.pulse, s.kernel, o);
  const std::string stamp = "eigen_dx=" + format_number(o.eigen_dx) + " min_nodes=" + std::to_string(o.min_nodes) +
                            " max_nodes=" + std::to_string(o.max_nodes);
  write_report(s.dir / "classify.txt", classification_entries(c), s.header(stamp));
  return to_string(c.verdict);
}

std::string run_mustar(const Scenario& s) {
  auto o = s.config.mu_star_options();
  if (!(o.lo > 0.0) || !(o.hi > o.lo)) throw ConfigError("mu_lo, mu_hi: need 0 < mu_lo < mu_hi");
  const auto r = find_mu_star(s.params, s.growth, s.pulse, s.kernel, o);
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("mu_star", format_number(r.mu_star));
  e.emplace_back("bracket_lo", format_number(r.lo));
  e.emplace_back("bracket_hi", format_number(r.hi));
  for (const auto& p : r.probes)
    e.emplace_back("probe " + format_number(p.mu1),
                   to_string(p.outcome.verdict) + " after " + std::to_string(p.outcome.periods) + " periods");
  const std::string stamp = "dx=" + format_number(o.simulation.dx) + " dt_scale=" +
                            format_number(o.simulation.dt_scale) + " horizon=" + std::to_string(o.horizon);
  write_report(s.dir / "mustar.txt", e, s.header(stamp));
  return "mu_star = " + format_number(r.mu_star);
}

}  // namespace

std::vector<std::string> subcommands() { return {"simulate", "eigen", "steady", "classify", "sweep", "mustar"}; }

fs::path resolve_out_dir(const std::string& flag, const ScenarioConfig& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PULSEFRONT_OUT"); env && *env) return env;
  if (!config.out_dir.empty()) return config.out_dir;
  return ".";
}

int run(const std::string& subcommand, const ScenarioConfig& config, const fs::path& out_dir, std::ostream& out,
        std::ostream& err) {
  try {
    const auto names = subcommands();
    if (std::find(names.begin(), names.end(), subcommand) == names.end())
      throw ConfigError("unknown subcommand '" + subcommand + "'");
    check_assumptions(config);
    fs::create_directories(out_dir);
    const Scenario s(config, out_dir);
    std::string line;
    if (subcommand == "simulate") line = run_simulate(s);
    else if (subcommand == "eigen") line = run_eigen(s);
    else if (subcommand == "steady") line = run_steady(s);
    else if (subcommand == "classify") line = run_classify(s);
    else if (subcommand == "sweep") line = run_sweep(s);
    else line = run_mustar(s);
    out << line << '\n';
    return 0;
  } catch (const IndeterminateOutcome& e) {
    err << "pulsefront " << subcommand << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "pulsefront " << subcommand << ": " << e.what() << '\n';
    return 2;
  }
}

}  // namespace pulsefront
