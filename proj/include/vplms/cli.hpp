#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vplms/experiment.hpp"

namespace CLI {
class App;
}

namespace vplms {

/// Command-line overrides; unset fields fall back to the config file, then
/// to the built-in defaults.
struct CliOptions
{
    std::optional<std::filesystem::path> config_file;
    std::optional<std::size_t> taps;
    std::vector<std::size_t> nonzero;
    std::optional<std::size_t> iters;
    std::optional<double> snr_db;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> algos;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::size_t> tail_window;
    std::optional<std::size_t> workers;
};

void add_experiment_options(CLI::App& app, CliOptions& options);

/// Defaults, then the config file, then flags. Throws ConfigError.
ExperimentConfig resolve_config(const CliOptions& options);

/// Parses `args` (without the program name) and resolves them.
ExperimentConfig parse_command_line(const std::vector<std::string>& args);

}  // namespace vplms
