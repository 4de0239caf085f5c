#include "vplms/experiment.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "vplms/errors.hpp"

namespace vplms {

namespace {

enum StreamId : std::uint64_t
{
    kSystemStream = 1,
    kInputStream = 2,
    kNoiseStream = 3,
};

}  // namespace

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t num_nonzero, std::size_t run_index)
{
    return mix_seed(mix_seed(base_seed, num_nonzero), run_index);
}

RunData make_run_data(const ExperimentConfig& config, std::size_t num_nonzero,
                      std::uint64_t seed)
{
    RunData data;

    SparseSystemSpec spec;
    spec.num_taps = config.num_taps;
    spec.num_nonzero = num_nonzero;
    spec.seed = seed;
    Rng system_rng = make_rng(seed, kSystemStream);
    data.system = generate_sparse_weights(spec, system_rng);

    Rng input_rng = make_rng(seed, kInputStream);
    data.input = generate_white_gaussian(config.signal_length, config.signal_variance, input_rng);
    Rng noise_rng = make_rng(seed, kNoiseStream);
    data.noise = generate_white_gaussian(config.signal_length, config.noise_variance(), noise_rng);

    data.output.assign(config.signal_length, 0.0);
    for (std::size_t k = config.num_taps; k <= config.signal_length; ++k) {
        const auto x = regressor(data.input, k, config.num_taps);
        data.output[k - 1] = system_output(data.system, x, data.noise.samples[k - 1]);
    }
    return data;
}

RunTrace run_algorithm(AlgoKind kind, const AlgoSettings& settings, const RunData& data,
                       std::size_t num_taps, std::uint64_t seed, const StepObserver* observer)
{
    SparseLmsFilter filter(kind, num_taps, settings.hyper, settings.schedule);
    const bool vp = is_variable_p(kind);
    const std::size_t length = data.input.samples.size();
    const std::span<const double> w_true = data.system.coefficients;

    RunTrace trace;
    trace.algo = kind;
    trace.run_seed = seed;
    trace.msd.reserve(length - num_taps + 1);
    if (vp) {
        trace.p.reserve(length - num_taps + 1);
    }

    std::vector<double> x = regressor(data.input, num_taps, num_taps);
    std::vector<double> x_next;
    for (std::size_t k = num_taps; k <= length; ++k) {
        std::optional<Observation> next;
        if (k < length) {
            x_next = regressor(data.input, k + 1, num_taps);
            next = Observation{x_next, data.output[k]};
        }
        if (vp) {
            trace.p.push_back(filter.state().p);
        }

        std::optional<FilterState> before;
        if (observer) {
            before = filter.state();
        }
        filter.step(Observation{x, data.output[k - 1]}, next,
                    needs_true_weights(kind) ? std::optional(w_true) : std::nullopt);
        if (observer) {
            (*observer)(kind, k - num_taps + 1, *before, filter.state(), settings.hyper);
        }

        trace.msd.push_back(squared_deviation(w_true, filter.state().w_est));
        x.swap(x_next);
    }
    return trace;
}

std::vector<RunTrace> run_single(const ExperimentConfig& config, std::size_t num_nonzero,
                                 std::size_t run_index, const StepObserver* observer)
{
    const std::uint64_t seed = run_seed(config.base_seed, num_nonzero, run_index);
    const RunData data = make_run_data(config, num_nonzero, seed);
    std::vector<RunTrace> traces;
    traces.reserve(config.algorithms.size());
    for (AlgoKind kind : config.algorithms) {
        traces.push_back(
            run_algorithm(kind, config.settings_for(kind), data, config.num_taps, seed, observer));
    }
    return traces;
}

MonteCarloResult run_monte_carlo(const ExperimentConfig& config)
{
    config.validate();

    std::size_t workers = config.workers;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, config.num_runs);

    MonteCarloResult result;
    const std::string fingerprint = config_fingerprint(config);

    for (std::size_t level : config.sparsity_levels) {
        std::vector<std::vector<RunTrace>> runs(config.num_runs);
        std::atomic<std::size_t> next_run{0};
        std::atomic<bool> failed{false};
        std::mutex error_mutex;
        std::string error;

        auto worker = [&] {
            while (!failed.load()) {
                const std::size_t idx = next_run.fetch_add(1);
                if (idx >= config.num_runs) {
                    return;
                }
                try {
                    runs[idx] = run_single(config, level, idx);
                } catch (const std::exception& e) {
                    std::lock_guard lock(error_mutex);
                    if (!failed.exchange(true)) {
                        error = fmt::format("run {} at {} nonzero taps failed: {}", idx, level,
                                            e.what());
                    }
                }
            }
        };

        if (workers == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t i = 0; i < workers; ++i) {
                pool.emplace_back(worker);
            }
        }
        if (failed) {
            throw Error(error);
        }

        SparsityResult sr;
        sr.num_nonzero = level;
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            std::vector<RunTrace> per_algo;
            per_algo.reserve(config.num_runs);
            for (auto& run : runs) {
                per_algo.push_back(std::move(run[a]));
            }
            EnsembleTrace ens = ensemble_average(per_algo);

            SummaryRecord rec;
            rec.algo = ens.algo;
            rec.num_nonzero = level;
            rec.sparsity_ratio =
                static_cast<double>(level) / static_cast<double>(config.num_taps);
            rec.steady_state_msd = steady_state_msd(ens, config.tail_window);
            if (!ens.mean_p.empty()) {
                rec.final_mean_p = ens.mean_p.back();
            }
            rec.num_runs = ens.num_runs;
            rec.fingerprint = fingerprint;
            result.summaries.push_back(std::move(rec));
            sr.ensembles.push_back(std::move(ens));
        }
        result.levels.push_back(std::move(sr));
    }
    return result;
}

}  // namespace vplms
