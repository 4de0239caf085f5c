#include "vplms/cli.hpp"

#include <algorithm>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vplms/errors.hpp"

namespace vplms {

void add_experiment_options(CLI::App& app, CliOptions& o)
{
    app.add_option("--config", o.config_file, "key = value config file with [algo] sections");
    app.add_option("--taps", o.taps, "number of filter taps N");
    app.add_option("--nonzero", o.nonzero, "nonzero taps S per sparsity level (repeatable)")
        ->take_all();
    app.add_option("--iters", o.iters, "signal length L");
    app.add_option("--snr-db", o.snr_db, "signal-to-noise ratio in dB");
    app.add_option("--runs", o.runs, "Monte-Carlo runs per sparsity level");
    app.add_option("--seed", o.seed, "base seed");
    app.add_option("--algos", o.algos, "algorithms: lms lp lpl vp_gse vp_gse_pl vp_gsd")
        ->delimiter(',');
    app.add_option("--out-dir", o.out_dir, "output directory");
    app.add_option("--tail-window", o.tail_window, "iterations averaged for steady-state MSD");
    app.add_option("--workers", o.workers, "parallel workers, 0 = hardware count");
}

ExperimentConfig resolve_config(const CliOptions& o)
{
    ExperimentConfig c = ExperimentConfig::defaults();
    if (o.config_file) {
        c = parse_config_file(*o.config_file, std::move(c));
    }
    if (o.taps) {
        c.num_taps = *o.taps;
    }
    if (!o.nonzero.empty()) {
        c.sparsity_levels = o.nonzero;
    }
    if (o.iters) {
        c.signal_length = *o.iters;
    }
    if (o.snr_db) {
        c.snr_db = *o.snr_db;
    }
    if (o.runs) {
        c.num_runs = *o.runs;
    }
    if (o.seed) {
        c.base_seed = *o.seed;
    }
    if (!o.algos.empty()) {
        c.algorithms.clear();
        for (const auto& name : o.algos) {
            const auto kind = parse_algo_name(name);
            if (!kind) {
                throw ConfigError(fmt::format("--algos: unknown algorithm '{}'", name));
            }
            c.algorithms.push_back(*kind);
        }
    }
    if (o.out_dir) {
        c.out_dir = *o.out_dir;
    }
    if (o.tail_window) {
        c.tail_window = *o.tail_window;
    }
    if (o.workers) {
        c.workers = *o.workers;
    }
    c.validate();
    return c;
}

ExperimentConfig parse_command_line(const std::vector<std::string>& args)
{
    CLI::App app{"vplms experiment"};
    CliOptions options;
    add_experiment_options(app, options);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(fmt::format("command line: {}", e.what()));
    }
    return resolve_config(options);
}

}  // namespace vplms
