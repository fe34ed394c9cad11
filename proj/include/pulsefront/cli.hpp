#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "pulsefront/config.hpp"

namespace pulsefront {

std::vector<std::string> subcommands();

/// Output directory: explicit flag, then PULSEFRONT_OUT, then the config, then ".".
std::filesystem::path resolve_out_dir(const std::string& flag, const ScenarioConfig& config);

/// Runs one subcommand, writes its files into out_dir and prints a one-line summary.
/// Returns 0 on success; on error prints a diagnostic to err and returns nonzero.
int run(const std::string& subcommand, const ScenarioConfig& config, const std::filesystem::path& out_dir,
        std::ostream& out, std::ostream& err);

}  // namespace pulsefront
