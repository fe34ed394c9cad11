#include "pulsefront/output.hpp"

#include <fstream>

#include "pulsefront/config.hpp"
#include "pulsefront/error.hpp"

namespace pulsefront {

namespace {

std::ofstream open(const std::filesystem::path& path, const FileHeader& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "# config_hash: " << header.config_hash << "\n";
  out << "# discretization: " << header.discretization << "\n";
  return out;
}

void row(std::ofstream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_number(v);
    first = false;
  }
  out << '\n';
}

}  // namespace

void write_fronts_csv(const std::filesystem::path& path, const Trajectory& traj, const FileHeader& header) {
  auto out = open(path, header);
  out << "t,g,h,gprime,hprime\n";
  for (const auto& r : traj.rows) row(out, {r.t, r.front.g, r.front.h, r.front.gprime, r.front.hprime});
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& s, const FileHeader& header) {
  auto out = open(path, header);
  out << "x,u,v\n";
  for (Index i = 0; i < s.x.size(); ++i) row(out, {s.x(i), s.u(i), s.v(i)});
}

void write_eigen_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows, const FileHeader& header) {
  auto out = open(path, header);
  out << "axis,lambda1,rho,residual,n_nodes\n";
  for (const auto& r : rows) {
    out << format_number(r.axis) << ',' << format_number(r.report.lambda1) << ',' << format_number(r.report.rho)
        << ',' << format_number(r.report.residual) << ',' << r.report.n_nodes << '\n';
  }
}

void write_steady_csv(const std::filesystem::path& path, const PeriodicState& state, const FileHeader& header) {
  auto out = open(path, header);
  out << "x,u,v,t\n";
  for (std::size_t k = 0; k < state.slices.size(); ++k) {
    const auto& f = state.slices[k];
    for (Index i = 0; i < f.size(); ++i) row(out, {state.grid.x(i), f.u(i), f.v(i), state.times[k]});
  }
}

void write_report(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& entries,
                  const FileHeader& header) {
  auto out = open(path, header);
  for (const auto& [k, v] : entries) out << k << ": " << v << '\n';
}

std::string eigen_stamp(const EigenReport& r) {
  return "n_nodes=" + std::to_string(r.n_nodes) + " dx=" + format_number(r.dx) + " method=" + r.method;
}

std::string trajectory_stamp(const Trajectory& t) {
  return "dx=" + format_number(t.dx) + " dt=" + format_number(t.dt) +
         " steps_per_period=" + std::to_string(t.steps_per_period);
}

}  // namespace pulsefront
