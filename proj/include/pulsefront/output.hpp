#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pulsefront/fixed_domain.hpp"
#include "pulsefront/free_boundary.hpp"
#include "pulsefront/spectral.hpp"

namespace pulsefront {

/// Comment lines written at the top of every output file.
struct FileHeader {
  std::string config_hash;
  std::string discretization;
};

/// t, g, h, gprime, hprime
void write_fronts_csv(const std::filesystem::path& path, const Trajectory& trajectory, const FileHeader& header);
/// x, u, v
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snapshot, const FileHeader& header);
/// axis, lambda1, rho, residual, n_nodes
void write_eigen_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows, const FileHeader& header);
/// x, u, v, t over every stored slice
void write_steady_csv(const std::filesystem::path& path, const PeriodicState& state, const FileHeader& header);
/// key: value lines
void write_report(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& entries,
                  const FileHeader& header);

/// "n_nodes=... dx=... method=..." for an eigen report.
std::string eigen_stamp(const EigenReport& report);
/// "dx=... dt=... steps_per_period=..." for a trajectory.
std::string trajectory_stamp(const Trajectory& trajectory);

}  // namespace pulsefront
