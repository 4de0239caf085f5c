// Monte-Carlo sparse system identification experiment.
//
// Writes one trace CSV per sparsity level, summary.json and config.json to
// the output directory.

#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vplms/cli.hpp"
#include "vplms/errors.hpp"
#include "vplms/experiment.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Variable-p norm-constraint LMS Monte-Carlo experiment"};
    vplms::CliOptions options;
    vplms::add_experiment_options(app, options);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress the summary table");
    CLI11_PARSE(app, argc, argv);

    try {
        const vplms::ExperimentConfig config = vplms::resolve_config(options);
        const vplms::MonteCarloResult result = vplms::run_monte_carlo(config);

        const auto files = vplms::write_traces_csv(result.levels, config.num_taps, config.out_dir);
        vplms::write_summary(result.summaries, config.out_dir / "summary.json");
        vplms::write_metadata(config, config.out_dir / "config.json");

        if (!quiet) {
            std::cout << fmt::format("{:<10} {:>8} {:>16} {:>10}\n", "algo", "SR", "steady MSD",
                                     "final p");
            for (const auto& r : result.summaries) {
                std::cout << fmt::format(
                    "{:<10} {:>8} {:>16.6e} {:>10}\n", vplms::algo_name(r.algo),
                    fmt::format("{}/{}", r.num_nonzero, config.num_taps), r.steady_state_msd,
                    r.final_mean_p ? fmt::format("{:.4f}", *r.final_mean_p) : std::string("-"));
            }
            std::cout << fmt::format("wrote {} trace files to {} (fingerprint {})\n", files.size(),
                                     config.out_dir.string(), vplms::config_fingerprint(config));
        }
    } catch (const vplms::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
