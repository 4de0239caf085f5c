#include "vplms/filters.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vplms/errors.hpp"
#include "vplms/gradients.hpp"
#include "vplms/signal_model.hpp"

namespace vplms {

namespace {

void check_dims(const FilterState& state, std::span<const double> x)
{
    if (x.size() != state.w_est.size()) {
        throw DimensionError("filter: regressor length " + std::to_string(x.size())
                             + " does not match " + std::to_string(state.w_est.size()) + " taps");
    }
}

// w += mu e x - rho G(w), G taken at the weights before this update.
void sparse_step(FilterState& state, std::span<const double> x, double e, double mu,
                 const PenaltyParams& penalty, PenaltyKind kind)
{
    check_dims(state, x);
    const std::vector<double> g = attractor(state.w_est, penalty, kind);
    for (std::size_t i = 0; i < x.size(); ++i) {
        state.w_est[i] += mu * e * x[i] - penalty.rho * g[i];
    }
    ++state.iteration;
}

}  // namespace

std::string_view algo_name(AlgoKind kind)
{
    switch (kind) {
    case AlgoKind::Lms: return "lms";
    case AlgoKind::LpLms: return "lp";
    case AlgoKind::LplLms: return "lpl";
    case AlgoKind::VpGseLms: return "vp_gse";
    case AlgoKind::VpGsePlLms: return "vp_gse_pl";
    case AlgoKind::VpGsdLms: return "vp_gsd";
    }
    return "unknown";
}

std::optional<AlgoKind> parse_algo_name(std::string_view name)
{
    for (AlgoKind kind : kAllAlgorithms) {
        if (algo_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

bool is_variable_p(AlgoKind kind)
{
    return kind == AlgoKind::VpGseLms || kind == AlgoKind::VpGsePlLms
           || kind == AlgoKind::VpGsdLms;
}

bool needs_true_weights(AlgoKind kind)
{
    return kind == AlgoKind::VpGsdLms;
}

PenaltyKind penalty_kind(AlgoKind kind)
{
    return (kind == AlgoKind::LplLms || kind == AlgoKind::VpGsePlLms) ? PenaltyKind::PNormLike
                                                                       : PenaltyKind::Lp;
}

void HyperParams::validate() const
{
    if (!(mu > 0.0)) {
        throw InvalidArgument("hyper: mu must be positive");
    }
    penalty.validate();
    if (smoothing_window < 1) {
        throw InvalidArgument("hyper: smoothing window T must be at least 1");
    }
    if (!(p_min > 0.0 && p_min < 1.0)) {
        throw InvalidArgument("hyper: p_min must lie in (0, 1)");
    }
    if (!(p0 > p_min && p0 <= 1.0)) {
        throw InvalidArgument("hyper: p0 must lie in (p_min, 1]");
    }
}

void DeltaSchedule::validate() const
{
    switch (kind) {
    case Kind::LinearDecay:
        if (!(initial_delta >= 0.0) || !(u >= 0.0)) {
            throw InvalidArgument("delta schedule: initial delta and u must be non-negative");
        }
        break;
    case Kind::Piecewise:
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (!(pieces[i].delta >= 0.0)) {
                throw InvalidArgument("delta schedule: piece values must be non-negative");
            }
            if (i > 0 && pieces[i].start_iteration <= pieces[i - 1].start_iteration) {
                throw InvalidArgument("delta schedule: piece starts must be strictly increasing");
            }
        }
        break;
    }
}

double DeltaSchedule::initial() const
{
    return kind == Kind::LinearDecay ? initial_delta : delta_at(*this, 1, 0.0);
}

DeltaSchedule DeltaSchedule::linear(double initial_delta, double u)
{
    DeltaSchedule s;
    s.kind = Kind::LinearDecay;
    s.initial_delta = initial_delta;
    s.u = u;
    return s;
}

DeltaSchedule DeltaSchedule::constant(double delta)
{
    DeltaSchedule s;
    s.kind = Kind::Piecewise;
    s.pieces = {{1, delta}};
    return s;
}

DeltaSchedule DeltaSchedule::gse_default()
{
    DeltaSchedule s;
    s.pieces = {{1, 0.01}, {101, 0.005}, {201, 0.003}, {301, 0.001}, {401, 0.0}};
    return s;
}

DeltaSchedule DeltaSchedule::gsd_default()
{
    DeltaSchedule s;
    s.pieces = {{1, 0.0},   {11, 0.05},   {31, 0.03},   {51, 0.02},
                {71, 0.01}, {91, 0.005}, {201, 0.001}};
    return s;
}

FilterState FilterState::initial(std::size_t num_taps, double p, double delta)
{
    FilterState s;
    s.w_est.assign(num_taps, 0.0);
    s.p = p;
    s.delta = delta;
    return s;
}

double predict_error(const FilterState& state, std::span<const double> x, double y)
{
    check_dims(state, x);
    return y - dot(state.w_est, x);
}

void lms_step(FilterState& state, std::span<const double> x, double e, double mu)
{
    check_dims(state, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        state.w_est[i] += mu * e * x[i];
    }
    ++state.iteration;
}

void lp_lms_step(FilterState& state, std::span<const double> x, double e,
                 const HyperParams& hyper)
{
    sparse_step(state, x, e, hyper.mu, hyper.penalty, PenaltyKind::Lp);
}

void lpl_lms_step(FilterState& state, std::span<const double> x, double e,
                  const HyperParams& hyper)
{
    sparse_step(state, x, e, hyper.mu, hyper.penalty, PenaltyKind::PNormLike);
}

double delta_at(const DeltaSchedule& schedule, std::size_t iteration, double current_delta)
{
    if (schedule.kind == DeltaSchedule::Kind::LinearDecay) {
        return std::max(current_delta - schedule.u, 0.0);
    }
    double delta = 0.0;
    for (const auto& piece : schedule.pieces) {
        if (piece.start_iteration > iteration) {
            break;
        }
        delta = piece.delta;
    }
    return delta;
}

void update_p(FilterState& state, double gradient, const DeltaSchedule& schedule,
              const HyperParams& hyper)
{
    const std::size_t window = hyper.smoothing_window;
    state.grad_history.push_back(gradient);
    while (state.grad_history.size() > window) {
        state.grad_history.pop_front();
    }
    if (state.iteration >= hyper.effective_warmup() && state.grad_history.size() == window) {
        const double mean =
            std::accumulate(state.grad_history.begin(), state.grad_history.end(), 0.0)
            / static_cast<double>(window);
        state.p = std::clamp(state.p - state.delta * sign(mean), hyper.p_min, 1.0);
    }
    state.delta = schedule.kind == DeltaSchedule::Kind::LinearDecay
                      ? delta_at(schedule, state.iteration, state.delta)
                      : delta_at(schedule, state.iteration + 1, state.delta);
}

std::optional<double> vp_step(FilterState& state, AlgoKind kind, Observation current,
                              std::optional<Observation> next, const HyperParams& hyper,
                              const DeltaSchedule& schedule,
                              std::optional<std::span<const double>> w_true)
{
    if (!is_variable_p(kind)) {
        throw InvalidArgument("vp_step: " + std::string(algo_name(kind))
                              + " is not a variable-p algorithm");
    }
    if (needs_true_weights(kind) && !w_true) {
        throw OracleUnavailable("vp_step: vp_gsd needs the true system weights");
    }

    const PenaltyKind pk = penalty_kind(kind);
    const PenaltyParams penalty = hyper.penalty.with_p(state.p);
    const std::vector<double> w_prev = state.w_est;

    const double e = predict_error(state, current.x, current.y);
    sparse_step(state, current.x, e, hyper.mu, penalty, pk);

    if (!next) {
        return std::nullopt;
    }

    GradContext ctx;
    ctx.w_prev = w_prev;
    ctx.e_next = predict_error(state, next->x, next->y);
    ctx.x_next = next->x;
    ctx.params = penalty;
    const std::vector<double> dgdp = d_attractor_dp(w_prev, penalty, pk);

    double gradient = 0.0;
    switch (kind) {
    case AlgoKind::VpGseLms:
        gradient = gse_gradient(ctx, dgdp);
        break;
    case AlgoKind::VpGsePlLms:
        gradient = gse_pl_gradient(ctx, dgdp);
        break;
    default:
        ctx.w_true = *w_true;
        ctx.w_next = std::span<const double>(state.w_est);
        gradient = gsd_gradient(ctx, dgdp);
        break;
    }
    update_p(state, gradient, schedule, hyper);
    return gradient;
}

SparseLmsFilter::SparseLmsFilter(AlgoKind kind, std::size_t num_taps, HyperParams hyper,
                                 DeltaSchedule schedule)
    : kind_(kind), hyper_(std::move(hyper)), schedule_(std::move(schedule))
{
    if (num_taps == 0) {
        throw InvalidArgument("filter: num_taps must be positive");
    }
    hyper_.validate();
    schedule_.validate();
    const bool vp = is_variable_p(kind_);
    state_ = FilterState::initial(num_taps, vp ? hyper_.p0 : hyper_.penalty.p,
                                  vp ? schedule_.initial() : 0.0);
}

void SparseLmsFilter::step(Observation current, std::optional<Observation> next,
                           std::optional<std::span<const double>> w_true)
{
    switch (kind_) {
    case AlgoKind::Lms:
        lms_step(state_, current.x, predict_error(state_, current.x, current.y), hyper_.mu);
        break;
    case AlgoKind::LpLms:
        lp_lms_step(state_, current.x, predict_error(state_, current.x, current.y), hyper_);
        break;
    case AlgoKind::LplLms:
        lpl_lms_step(state_, current.x, predict_error(state_, current.x, current.y), hyper_);
        break;
    default:
        vp_step(state_, kind_, current, next, hyper_, schedule_, w_true);
        break;
    }
}

}  // namespace vplms
