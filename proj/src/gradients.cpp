#include "vplms/gradients.hpp"

#include <cmath>
#include <string>

#include "vplms/errors.hpp"
#include "vplms/signal_model.hpp"

namespace vplms {

namespace {

struct NormMoments
{
    double norm = 0.0;
    double sum_pow = 0.0;      // sum |w_j|^p
    double sum_pow_log = 0.0;  // sum |w_j|^p ln|w_j|
};

NormMoments norm_moments(std::span<const double> w, double p, double zero_floor)
{
    NormMoments m;
    for (double v : w) {
        const double mag = std::abs(v);
        if (mag <= zero_floor) {
            continue;
        }
        const double pw = std::pow(mag, p);
        m.sum_pow += pw;
        m.sum_pow_log += pw * std::log(mag);
    }
    if (m.sum_pow > 0.0) {
        m.norm = std::pow(m.sum_pow, 1.0 / p);
    }
    return m;
}

void check_lengths(const GradContext& ctx, std::span<const double> dGdp)
{
    const auto n = dGdp.size();
    if (ctx.w_prev.size() != n || ctx.x_next.size() != n) {
        throw DimensionError("gradient context: sequences must share length "
                             + std::to_string(n));
    }
}

}  // namespace

double d_lp_norm_dp(std::span<const double> w, double p, double zero_floor)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidArgument("d_lp_norm_dp: p must lie in (0, 1]");
    }
    const NormMoments m = norm_moments(w, p, zero_floor);
    if (m.sum_pow == 0.0) {
        return 0.0;
    }
    return m.norm / p * (m.sum_pow_log / m.sum_pow - std::log(m.norm));
}

std::vector<double> d_lp_attractor_dp(std::span<const double> w, const PenaltyParams& params)
{
    params.validate();
    std::vector<double> out(w.size(), 0.0);
    const double p = params.p;
    const NormMoments m = norm_moments(w, p, params.zero_floor);
    if (m.norm <= params.zero_floor) {
        return out;
    }
    const double scale = std::pow(m.norm, 1.0 - p);
    const double c = (1.0 - p) * m.sum_pow_log / m.sum_pow - std::log(m.norm);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double mag = std::abs(w[i]);
        if (mag <= params.zero_floor) {
            continue;
        }
        const double g = attractor_power(mag, params);
        const double b = params.epsilon + g;
        out[i] = sign(w[i]) * scale * (c * b / p + g * std::log(mag)) / (b * b);
    }
    return out;
}

std::vector<double> d_pl_attractor_dp(std::span<const double> w, const PenaltyParams& params)
{
    params.validate();
    std::vector<double> out(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double mag = std::abs(w[i]);
        if (mag <= params.zero_floor) {
            continue;
        }
        const double g = attractor_power(mag, params);
        const double b = params.epsilon + g;
        out[i] = sign(w[i]) * (b + params.p * g * std::log(mag)) / (b * b);
    }
    return out;
}

double gse_gradient(const GradContext& ctx, std::span<const double> dGdp)
{
    check_lengths(ctx, dGdp);
    return 2.0 * ctx.params.rho * ctx.e_next * dot(ctx.x_next, dGdp);
}

double gse_pl_gradient(const GradContext& ctx, std::span<const double> dGdp)
{
    return gse_gradient(ctx, dGdp);
}

double gsd_gradient(const GradContext& ctx, std::span<const double> dGdp)
{
    if (!ctx.w_true || !ctx.w_next) {
        throw OracleUnavailable("gsd gradient: true weights and updated estimate are required");
    }
    const auto& w_true = *ctx.w_true;
    const auto& w_next = *ctx.w_next;
    if (w_true.size() != dGdp.size() || w_next.size() != dGdp.size()) {
        throw DimensionError("gsd gradient: sequences must share length "
                             + std::to_string(dGdp.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < dGdp.size(); ++i) {
        acc += (w_true[i] - w_next[i]) * dGdp[i];
    }
    return 2.0 * ctx.params.rho * acc;
}

double fd_gradient_oracle(const std::function<double(double)>& f, double p, double h)
{
    if (!(h > 0.0)) {
        throw InvalidArgument("fd oracle: step must be positive");
    }
    if (!(p - h > 0.0 && p + h < 1.0)) {
        throw DomainError("fd oracle: p +- h leaves (0, 1) at p = " + std::to_string(p));
    }
    return (f(p + h) - f(p - h)) / (2.0 * h);
}

std::vector<double> d_attractor_dp(std::span<const double> w, const PenaltyParams& params,
                                   PenaltyKind kind)
{
    return kind == PenaltyKind::Lp ? d_lp_attractor_dp(w, params) : d_pl_attractor_dp(w, params);
}

}  // namespace vplms
