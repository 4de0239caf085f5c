#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vplms/filters.hpp"
#include "vplms/metrics.hpp"
#include "vplms/signal_model.hpp"

namespace vplms {

struct AlgoSettings
{
    HyperParams hyper;
    DeltaSchedule schedule = DeltaSchedule::constant(0.0);
};

struct ExperimentConfig
{
    std::size_t num_taps = 16;
    std::vector<std::size_t> sparsity_levels = {1, 4, 8, 16};
    std::size_t signal_length = 500;
    double snr_db = 20.0;
    double signal_variance = 1.0;
    std::size_t num_runs = 200;
    std::uint64_t base_seed = 1;
    std::vector<AlgoKind> algorithms = {kAllAlgorithms.begin(), kAllAlgorithms.end()};
    std::map<AlgoKind, AlgoSettings> settings;
    std::size_t tail_window = 50;
    std::filesystem::path out_dir = "results";
    /// Parallel workers for run_monte_carlo; 0 picks the hardware count.
    /// Has no effect on results.
    std::size_t workers = 1;

    /// Defaults for every field, including per-algorithm settings.
    static ExperimentConfig defaults();

    /// Throws ConfigError naming the offending field.
    void validate() const;

    const AlgoSettings& settings_for(AlgoKind kind) const;
    double noise_variance() const;
    /// Iterations per run: signal_length - num_taps + 1.
    std::size_t num_iterations() const { return signal_length - num_taps + 1; }
};

/// Default hyperparameters and schedule of one algorithm.
AlgoSettings default_settings(AlgoKind kind);

/// Reads `key = value` text with optional per-algorithm `[section]`s on
/// top of `base`. Comments start with ';'. Unknown keys or sections and
/// invalid values throw ConfigError.
ExperimentConfig parse_config_text(std::string_view text,
                                   ExperimentConfig base = ExperimentConfig::defaults());
ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   ExperimentConfig base = ExperimentConfig::defaults());

/// Canonical text form of every field that influences results.
std::string canonical_config(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a over canonical_config.
std::string config_fingerprint(const ExperimentConfig& config);

/// Called after every weight update with the state before and after it.
using StepObserver = std::function<void(AlgoKind kind, std::size_t iteration,
                                        const FilterState& before, const FilterState& after,
                                        const HyperParams& hyper)>;

/// Seed of run `run_index` at sparsity `num_nonzero`; independent of any
/// other run.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t num_nonzero, std::size_t run_index);

/// Signals shared by every algorithm in one run.
struct RunData
{
    TrueWeights system;
    SignalStream input;
    SignalStream noise;
    /// y_k for k = 1..L; entries before the first full window are unused.
    std::vector<double> output;
};

RunData make_run_data(const ExperimentConfig& config, std::size_t num_nonzero,
                      std::uint64_t seed);

/// Runs one algorithm over a run's signals and records its trace.
RunTrace run_algorithm(AlgoKind kind, const AlgoSettings& settings, const RunData& data,
                       std::size_t num_taps, std::uint64_t seed,
                       const StepObserver* observer = nullptr);

/// One Monte-Carlo run: a fresh system and streams, every configured
/// algorithm on identical signals.
std::vector<RunTrace> run_single(const ExperimentConfig& config, std::size_t num_nonzero,
                                 std::size_t run_index, const StepObserver* observer = nullptr);

struct SparsityResult
{
    std::size_t num_nonzero = 0;
    /// One per configured algorithm, in config order.
    std::vector<EnsembleTrace> ensembles;
};

struct SummaryRecord
{
    AlgoKind algo = AlgoKind::Lms;
    std::size_t num_nonzero = 0;
    double sparsity_ratio = 0.0;
    double steady_state_msd = 0.0;
    std::optional<double> final_mean_p;
    std::size_t num_runs = 0;
    std::string fingerprint;
};

struct MonteCarloResult
{
    std::vector<SparsityResult> levels;
    std::vector<SummaryRecord> summaries;
};

/// num_runs runs per sparsity level, spread over config.workers threads and
/// reduced in run order. A failing run aborts with its level and index.
MonteCarloResult run_monte_carlo(const ExperimentConfig& config);

/// traces_s<S>_n<N>.csv in `dir`
std::filesystem::path trace_csv_path(const std::filesystem::path& dir, std::size_t num_nonzero,
                                     std::size_t num_taps);

/// One CSV per sparsity level: iteration, msd_<algo>..., p_<vp algo>...;
/// values printed with 17 significant digits. Returns the files written.
std::vector<std::filesystem::path> write_traces_csv(std::span<const SparsityResult> levels,
                                                    std::size_t num_taps,
                                                    const std::filesystem::path& dir);

/// JSON array of summary records.
void write_summary(std::span<const SummaryRecord> records, const std::filesystem::path& path);

/// JSON dump of the resolved config with its fingerprint.
void write_metadata(const ExperimentConfig& config, const std::filesystem::path& path);

}  // namespace vplms
