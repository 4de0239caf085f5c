#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "vplms/errors.hpp"
#include "vplms/experiment.hpp"

namespace vplms {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) {
            out.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

double to_double(std::string_view field, std::string_view text)
{
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", field, text));
    }
    return value;
}

std::uint64_t to_unsigned(std::string_view field, std::string_view text)
{
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", field, text));
    }
    return value;
}

bool to_bool(std::string_view field, std::string_view text)
{
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", field, text));
}

std::vector<DeltaPiece> to_pieces(std::string_view field, std::string_view text)
{
    std::vector<DeltaPiece> pieces;
    for (auto item : split_list(text)) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError(fmt::format("{}: piece '{}' must look like start:delta", field, item));
        }
        pieces.push_back({static_cast<std::size_t>(to_unsigned(field, item.substr(0, colon))),
                          to_double(field, item.substr(colon + 1))});
    }
    return pieces;
}

void apply_algo_key(AlgoSettings& s, std::string_view section, std::string_view key,
                    std::string_view value)
{
    const std::string field = fmt::format("[{}] {}", section, key);
    HyperParams& h = s.hyper;
    if (key == "mu") {
        h.mu = to_double(field, value);
    } else if (key == "rho") {
        h.penalty.rho = to_double(field, value);
    } else if (key == "epsilon") {
        h.penalty.epsilon = to_double(field, value);
    } else if (key == "p") {
        h.penalty.p = to_double(field, value);
    } else if (key == "zero_floor") {
        h.penalty.zero_floor = to_double(field, value);
    } else if (key == "p0") {
        h.p0 = to_double(field, value);
    } else if (key == "p_min") {
        h.p_min = to_double(field, value);
    } else if (key == "T") {
        h.smoothing_window = to_unsigned(field, value);
    } else if (key == "warmup") {
        h.warmup = to_unsigned(field, value);
    } else if (key == "newton") {
        if (to_bool(field, value)) {
            h.penalty.newton = h.penalty.newton.value_or(NewtonPowConfig{});
        } else {
            h.penalty.newton.reset();
        }
    } else if (key == "newton_iterations") {
        if (!h.penalty.newton) {
            h.penalty.newton = NewtonPowConfig{};
        }
        h.penalty.newton->iterations = static_cast<int>(to_unsigned(field, value));
    } else if (key == "schedule") {
        const auto v = trim(value);
        if (v == "piecewise") {
            s.schedule.kind = DeltaSchedule::Kind::Piecewise;
        } else if (v == "linear") {
            s.schedule.kind = DeltaSchedule::Kind::LinearDecay;
        } else {
            throw ConfigError(fmt::format("{}: expected 'piecewise' or 'linear', got '{}'", field, v));
        }
    } else if (key == "pieces") {
        s.schedule.pieces = to_pieces(field, value);
    } else if (key == "delta0") {
        s.schedule.initial_delta = to_double(field, value);
    } else if (key == "u") {
        s.schedule.u = to_double(field, value);
    } else {
        throw ConfigError(fmt::format("{}: unknown key", field));
    }
}

void apply_top_key(ExperimentConfig& c, std::string_view key, std::string_view value)
{
    if (key == "taps") {
        c.num_taps = to_unsigned(key, value);
    } else if (key == "nonzero") {
        c.sparsity_levels.clear();
        for (auto item : split_list(value)) {
            c.sparsity_levels.push_back(to_unsigned(key, item));
        }
    } else if (key == "iters") {
        c.signal_length = to_unsigned(key, value);
    } else if (key == "snr_db") {
        c.snr_db = to_double(key, value);
    } else if (key == "signal_variance") {
        c.signal_variance = to_double(key, value);
    } else if (key == "runs") {
        c.num_runs = to_unsigned(key, value);
    } else if (key == "seed") {
        c.base_seed = to_unsigned(key, value);
    } else if (key == "algos") {
        c.algorithms.clear();
        for (auto item : split_list(value)) {
            const auto kind = parse_algo_name(item);
            if (!kind) {
                throw ConfigError(fmt::format("algos: unknown algorithm '{}'", item));
            }
            c.algorithms.push_back(*kind);
        }
    } else if (key == "tail_window") {
        c.tail_window = to_unsigned(key, value);
    } else if (key == "out_dir") {
        c.out_dir = std::string(trim(value));
    } else if (key == "workers") {
        c.workers = to_unsigned(key, value);
    } else {
        throw ConfigError(fmt::format("{}: unknown key", key));
    }
}

// FNV-1a, 64 bit
std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

AlgoSettings default_settings(AlgoKind kind)
{
    AlgoSettings s;
    s.hyper.mu = 5e-2;
    s.hyper.penalty.rho = 5e-4;
    s.hyper.penalty.epsilon = 5e-2;
    s.hyper.penalty.p = 0.5;
    s.hyper.smoothing_window = 5;
    switch (kind) {
    case AlgoKind::VpGseLms:
    case AlgoKind::VpGsePlLms:
        s.hyper.p0 = 1.0;
        s.schedule = DeltaSchedule::gse_default();
        break;
    case AlgoKind::VpGsdLms:
        s.hyper.p0 = 0.5;
        s.schedule = DeltaSchedule::gsd_default();
        break;
    default:
        s.hyper.p0 = s.hyper.penalty.p;
        break;
    }
    return s;
}

ExperimentConfig ExperimentConfig::defaults()
{
    ExperimentConfig c;
    for (AlgoKind kind : kAllAlgorithms) {
        c.settings[kind] = default_settings(kind);
    }
    return c;
}

const AlgoSettings& ExperimentConfig::settings_for(AlgoKind kind) const
{
    const auto it = settings.find(kind);
    if (it == settings.end()) {
        throw ConfigError(fmt::format("[{}]: no settings", algo_name(kind)));
    }
    return it->second;
}

double ExperimentConfig::noise_variance() const
{
    return snr_to_noise_variance(snr_db, signal_variance);
}

void ExperimentConfig::validate() const
{
    if (num_taps == 0) {
        throw ConfigError("taps: must be positive");
    }
    if (sparsity_levels.empty()) {
        throw ConfigError("nonzero: at least one sparsity level is required");
    }
    for (std::size_t s : sparsity_levels) {
        if (s < 1 || s > num_taps) {
            throw ConfigError(fmt::format("nonzero: {} is outside [1, taps = {}]", s, num_taps));
        }
    }
    if (signal_length < num_taps) {
        throw ConfigError(fmt::format("iters: signal length {} is shorter than taps = {}",
                                      signal_length, num_taps));
    }
    if (!(signal_variance > 0.0)) {
        throw ConfigError("signal_variance: must be positive");
    }
    if (!std::isfinite(snr_db)) {
        throw ConfigError("snr_db: must be finite");
    }
    if (num_runs < 1) {
        throw ConfigError("runs: must be at least 1");
    }
    if (algorithms.empty()) {
        throw ConfigError("algos: at least one algorithm is required");
    }
    std::set<AlgoKind> seen;
    for (AlgoKind kind : algorithms) {
        if (!seen.insert(kind).second) {
            throw ConfigError(fmt::format("algos: '{}' listed twice", algo_name(kind)));
        }
        const AlgoSettings& s = settings_for(kind);
        try {
            s.hyper.validate();
            s.schedule.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(fmt::format("[{}] {}", algo_name(kind), e.what()));
        }
    }
    if (tail_window < 1 || tail_window > num_iterations()) {
        throw ConfigError(fmt::format("tail_window: {} is outside [1, {}]", tail_window,
                                      num_iterations()));
    }
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("config: {}", e.what()));
    }

    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            apply_top_key(base, key, node.data());
            continue;
        }
        const auto kind = parse_algo_name(key);
        if (!kind) {
            throw ConfigError(fmt::format("[{}]: unknown section", key));
        }
        AlgoSettings& s = base.settings[*kind];
        for (const auto& [sub_key, sub_node] : node) {
            apply_algo_key(s, key, sub_key, sub_node.data());
        }
    }
    base.validate();
    return base;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("config: cannot read '{}'", path.string()));
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), std::move(base));
}

std::string canonical_config(const ExperimentConfig& c)
{
    std::string out;
    auto line = [&out](std::string_view key, const auto& value) {
        out += fmt::format("{}={}\n", key, value);
    };
    auto num = [](double v) { return fmt::format("{:.17g}", v); };

    line("taps", c.num_taps);
    line("nonzero", fmt::format("{}", fmt::join(c.sparsity_levels, ",")));
    line("iters", c.signal_length);
    line("snr_db", num(c.snr_db));
    line("signal_variance", num(c.signal_variance));
    line("runs", c.num_runs);
    line("seed", c.base_seed);
    line("tail_window", c.tail_window);
    for (AlgoKind kind : c.algorithms) {
        const AlgoSettings& s = c.settings_for(kind);
        const HyperParams& h = s.hyper;
        out += fmt::format("[{}]\n", algo_name(kind));
        line("mu", num(h.mu));
        line("rho", num(h.penalty.rho));
        line("epsilon", num(h.penalty.epsilon));
        line("p", num(h.penalty.p));
        line("zero_floor", num(h.penalty.zero_floor));
        line("p0", num(h.p0));
        line("p_min", num(h.p_min));
        line("T", h.smoothing_window);
        line("warmup", h.effective_warmup());
        if (h.penalty.newton) {
            const NewtonPowConfig& n = *h.penalty.newton;
            line("newton_iterations", n.iterations);
            line("newton_delta", n.delta_n ? num(*n.delta_n) : std::string("exponent"));
            line("newton_seed", n.initial_guess ? num(*n.initial_guess) : std::string("rational"));
        }
        if (is_variable_p(kind)) {
            if (s.schedule.kind == DeltaSchedule::Kind::LinearDecay) {
                line("schedule", "linear");
                line("delta0", num(s.schedule.initial_delta));
                line("u", num(s.schedule.u));
            } else {
                line("schedule", "piecewise");
                std::string pieces;
                for (const auto& piece : s.schedule.pieces) {
                    pieces += fmt::format("{}:{},", piece.start_iteration, num(piece.delta));
                }
                line("pieces", pieces);
            }
        }
    }
    return out;
}

std::string config_fingerprint(const ExperimentConfig& config)
{
    return fmt::format("{:016x}", fnv1a(canonical_config(config)));
}

}  // namespace vplms
