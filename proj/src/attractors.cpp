#include "vplms/attractors.hpp"

#include <cmath>
#include <string>

#include "vplms/errors.hpp"

namespace vplms {

void NewtonPowConfig::validate() const
{
    if (iterations < 1) {
        throw InvalidArgument("newton pow: iterations must be at least 1");
    }
    if (delta_n && !(*delta_n > 0.0)) {
        throw InvalidArgument("newton pow: delta_n must be positive");
    }
    if (initial_guess && !(*initial_guess > 0.0)) {
        throw InvalidArgument("newton pow: initial_guess must be positive");
    }
}

void PenaltyParams::validate() const
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidArgument("penalty: p must lie in (0, 1], got " + std::to_string(p));
    }
    if (!(rho >= 0.0)) {
        throw InvalidArgument("penalty: rho must be non-negative");
    }
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("penalty: epsilon must be positive");
    }
    if (!(zero_floor > 0.0)) {
        throw InvalidArgument("penalty: zero_floor must be positive");
    }
    if (newton) {
        newton->validate();
    }
}

double lp_norm(std::span<const double> w, double p, double zero_floor)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidArgument("lp_norm: p must lie in (0, 1], got " + std::to_string(p));
    }
    double sum = 0.0;
    for (double v : w) {
        const double mag = std::abs(v);
        if (mag > zero_floor) {
            sum += std::pow(mag, p);
        }
    }
    if (sum == 0.0) {
        return 0.0;
    }
    return std::pow(sum, 1.0 / p);
}

int sign(double x) noexcept
{
    return (x > 0.0) - (x < 0.0);
}

std::vector<double> sign(std::span<const double> w)
{
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i] = sign(w[i]);
    }
    return out;
}

double attractor_power(double magnitude, const PenaltyParams& params)
{
    const double exponent = 1.0 - params.p;
    if (params.newton) {
        return newton_pow(magnitude, exponent, *params.newton, params.zero_floor);
    }
    return std::pow(magnitude, exponent);
}

std::vector<double> lp_attractor(std::span<const double> w, const PenaltyParams& params)
{
    params.validate();
    std::vector<double> g(w.size(), 0.0);
    const double norm = lp_norm(w, params.p, params.zero_floor);
    if (norm <= params.zero_floor) {
        return g;
    }
    const double scale = std::pow(norm, 1.0 - params.p);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double mag = std::abs(w[i]);
        if (mag <= params.zero_floor) {
            continue;
        }
        g[i] = scale * sign(w[i]) / (params.epsilon + attractor_power(mag, params));
    }
    return g;
}

std::vector<double> pl_attractor(std::span<const double> w, const PenaltyParams& params)
{
    params.validate();
    std::vector<double> g(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double mag = std::abs(w[i]);
        if (mag <= params.zero_floor) {
            continue;
        }
        g[i] = params.p * sign(w[i]) / (params.epsilon + attractor_power(mag, params));
    }
    return g;
}

double newton_seed(double base, double exponent)
{
    // base = m 2^E with m in [0.5, 1): m^e from the [1/1] Pade approximant
    // around 1, 2^(E e) = 2^whole 2^frac with 2^frac ~ 1 + frac.
    int binary_exp = 0;
    const double m = std::frexp(base, &binary_exp);
    const double mantissa_pow =
        ((1.0 + exponent) * m + (1.0 - exponent)) / ((1.0 - exponent) * m + (1.0 + exponent));
    const double scaled = binary_exp * exponent;
    const double whole = std::floor(scaled);
    return mantissa_pow * std::ldexp(1.0 + (scaled - whole), static_cast<int>(whole));
}

double newton_pow(double base, double exponent, const NewtonPowConfig& cfg, double zero_floor)
{
    cfg.validate();
    if (!(base > zero_floor)) {
        throw InvalidArgument("newton_pow: base must exceed the zero floor");
    }
    if (!(exponent >= 0.0 && exponent < 1.0)) {
        throw InvalidArgument("newton_pow: exponent must lie in [0, 1), got "
                              + std::to_string(exponent));
    }
    if (exponent == 0.0) {
        return 1.0;
    }

    const double delta = cfg.delta_n.value_or(exponent);
    const double inv = 1.0 / delta;
    const double target = (delta == exponent) ? base : std::pow(base, exponent / delta);

    double g = cfg.initial_guess ? *cfg.initial_guess : newton_seed(base, exponent);
    for (int j = 0; j < cfg.iterations; ++j) {
        g -= delta * (std::pow(g, inv) - target) / std::pow(g, inv - 1.0);
        if (!std::isfinite(g)) {
            throw NumericFailure("newton_pow: iterate diverged");
        }
        if (g <= 0.0) {
            g = zero_floor;
        }
    }
    return g;
}

std::vector<double> attractor(std::span<const double> w, const PenaltyParams& params,
                              PenaltyKind kind)
{
    return kind == PenaltyKind::Lp ? lp_attractor(w, params) : pl_attractor(w, params);
}

}  // namespace vplms
