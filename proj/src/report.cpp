#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "vplms/errors.hpp"
#include "vplms/experiment.hpp"

namespace vplms {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(fmt::format("cannot write '{}'", path.string()));
    }
    return out;
}

std::string num(double v)
{
    return fmt::format("{:.17g}", v);
}

}  // namespace

std::filesystem::path trace_csv_path(const std::filesystem::path& dir, std::size_t num_nonzero,
                                     std::size_t num_taps)
{
    return dir / fmt::format("traces_s{}_n{}.csv", num_nonzero, num_taps);
}

std::vector<std::filesystem::path> write_traces_csv(std::span<const SparsityResult> levels,
                                                    std::size_t num_taps,
                                                    const std::filesystem::path& dir)
{
    if (levels.empty()) {
        throw InvalidArgument("trace csv: no ensembles to write");
    }
    for (const auto& level : levels) {
        if (level.ensembles.empty()) {
            throw InvalidArgument("trace csv: sparsity level without ensembles");
        }
        const std::size_t rows = level.ensembles.front().mean_msd.size();
        for (const auto& ens : level.ensembles) {
            if (ens.mean_msd.size() != rows || (!ens.mean_p.empty() && ens.mean_p.size() != rows)) {
                throw DimensionError("trace csv: ensemble lengths differ");
            }
        }
    }

    std::vector<std::filesystem::path> written;
    for (const auto& level : levels) {
        const auto path = trace_csv_path(dir, level.num_nonzero, num_taps);
        std::ofstream out = open_for_write(path);

        std::string header = "iteration";
        for (const auto& ens : level.ensembles) {
            header += fmt::format(",msd_{}", algo_name(ens.algo));
        }
        for (const auto& ens : level.ensembles) {
            if (is_variable_p(ens.algo)) {
                header += fmt::format(",p_{}", algo_name(ens.algo));
            }
        }
        out << header << '\n';

        const std::size_t rows = level.ensembles.front().mean_msd.size();
        for (std::size_t i = 0; i < rows; ++i) {
            std::string row = std::to_string(i + 1);
            for (const auto& ens : level.ensembles) {
                row += ',';
                row += num(ens.mean_msd[i]);
            }
            for (const auto& ens : level.ensembles) {
                if (is_variable_p(ens.algo)) {
                    row += ',';
                    row += num(ens.mean_p[i]);
                }
            }
            out << row << '\n';
        }
        if (!out) {
            throw Error(fmt::format("failed writing '{}'", path.string()));
        }
        written.push_back(path);
    }
    return written;
}

void write_summary(std::span<const SummaryRecord> records, const std::filesystem::path& path)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j;
        j["algo"] = algo_name(r.algo);
        j["num_nonzero"] = r.num_nonzero;
        j["sparsity_ratio"] = r.sparsity_ratio;
        j["steady_state_msd"] = r.steady_state_msd;
        j["final_mean_p"] = r.final_mean_p ? nlohmann::json(*r.final_mean_p) : nlohmann::json();
        j["num_runs"] = r.num_runs;
        j["fingerprint"] = r.fingerprint;
        arr.push_back(std::move(j));
    }
    std::ofstream out = open_for_write(path);
    out << arr.dump(2) << '\n';
}

void write_metadata(const ExperimentConfig& config, const std::filesystem::path& path)
{
    nlohmann::json j;
    j["fingerprint"] = config_fingerprint(config);
    j["taps"] = config.num_taps;
    j["nonzero"] = config.sparsity_levels;
    j["iters"] = config.signal_length;
    j["iterations_per_run"] = config.num_iterations();
    j["snr_db"] = config.snr_db;
    j["signal_variance"] = config.signal_variance;
    j["noise_variance"] = config.noise_variance();
    j["runs"] = config.num_runs;
    j["seed"] = config.base_seed;
    j["tail_window"] = config.tail_window;
    j["true_system"] = "support and values redrawn for every run";
    j["canonical"] = canonical_config(config);

    nlohmann::json algos = nlohmann::json::object();
    for (AlgoKind kind : config.algorithms) {
        const AlgoSettings& s = config.settings_for(kind);
        nlohmann::json a;
        a["mu"] = s.hyper.mu;
        a["rho"] = s.hyper.penalty.rho;
        a["epsilon"] = s.hyper.penalty.epsilon;
        a["zero_floor"] = s.hyper.penalty.zero_floor;
        a["newton"] = s.hyper.penalty.newton.has_value();
        if (is_variable_p(kind)) {
            a["p0"] = s.hyper.p0;
            a["p_min"] = s.hyper.p_min;
            a["T"] = s.hyper.smoothing_window;
            a["warmup"] = s.hyper.effective_warmup();
            if (s.schedule.kind == DeltaSchedule::Kind::LinearDecay) {
                a["schedule"] = {{"kind", "linear"},
                                 {"delta0", s.schedule.initial_delta},
                                 {"u", s.schedule.u}};
            } else {
                nlohmann::json pieces = nlohmann::json::array();
                for (const auto& piece : s.schedule.pieces) {
                    pieces.push_back({piece.start_iteration, piece.delta});
                }
                a["schedule"] = {{"kind", "piecewise"}, {"pieces", pieces}};
            }
        } else if (kind != AlgoKind::Lms) {
            a["p"] = s.hyper.penalty.p;
        }
        algos[std::string(algo_name(kind))] = std::move(a);
    }
    j["algorithms"] = std::move(algos);

    std::ofstream out = open_for_write(path);
    out << j.dump(2) << '\n';
}

}  // namespace vplms
