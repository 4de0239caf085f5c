#pragma once

#include <optional>
#include <span>
#include <vector>

namespace vplms {

inline constexpr double kDefaultZeroFloor = 1e-12;

/// Newton-iteration replacement for the fractional power |w_i|^(1-p).
struct NewtonPowConfig
{
    /// Step scale of the iteration. Unset means "use the exponent", which
    /// makes the target c = base^(exponent/delta) equal to the base itself.
    std::optional<double> delta_n;
    int iterations = 4;
    /// Starting point g_0. Unset selects newton_seed.
    std::optional<double> initial_guess;

    void validate() const;
};

/// Zero-attractor parameters shared by the Lp and p-norm-like penalties.
struct PenaltyParams
{
    /// Attractor strength (step size times penalty weight). Zero disables
    /// the penalty.
    double rho = 5e-4;
    double epsilon = 5e-2;
    double p = 0.5;
    /// Magnitudes at or below this are treated as exact zeros.
    double zero_floor = kDefaultZeroFloor;
    /// When set, elementwise powers |w_i|^(1-p) go through newton_pow.
    std::optional<NewtonPowConfig> newton;

    void validate() const;

    PenaltyParams with_p(double new_p) const
    {
        PenaltyParams copy = *this;
        copy.p = new_p;
        return copy;
    }
};

/// (sum_i |w_i|^p)^(1/p) over entries above zero_floor; 0 if none remain.
/// Throws InvalidArgument for p outside (0, 1].
double lp_norm(std::span<const double> w, double p, double zero_floor = kDefaultZeroFloor);

/// -1, 0 or +1 with an exact comparison against zero.
int sign(double x) noexcept;
std::vector<double> sign(std::span<const double> w);

/// |w_i|^(1-p) as the attractors see it: std::pow, or newton_pow when the
/// penalty enables it. `magnitude` must exceed params.zero_floor.
double attractor_power(double magnitude, const PenaltyParams& params);

/// Lp-norm zero attractor
///
///   G_i = ||w||_p^(1-p) sign(w_i) / (eps + |w_i|^(1-p)).
///
/// The caller subtracts rho * G. All-zero when ||w||_p <= zero_floor.
std::vector<double> lp_attractor(std::span<const double> w, const PenaltyParams& params);

/// p-norm-like zero attractor
///
///   G_i = p sign(w_i) / (eps + |w_i|^(1-p)),
///
/// bounded by p / eps in magnitude.
std::vector<double> pl_attractor(std::span<const double> w, const PenaltyParams& params);

/// Starting point for newton_pow within a few percent of base^exponent for
/// any positive base, built from frexp/ldexp and one rational function.
double newton_seed(double base, double exponent);

/// Newton iteration for base^exponent:
///
///   g_{j+1} = g_j - delta (g_j^(1/delta) - c) / g_j^(1/delta - 1),
///   c = base^(exponent/delta).
///
/// exponent == 0 returns 1. Throws NumericFailure when an iterate stops
/// being finite.
double newton_pow(double base, double exponent, const NewtonPowConfig& cfg,
                  double zero_floor = kDefaultZeroFloor);

enum class PenaltyKind
{
    Lp,
    PNormLike,
};

/// lp_attractor or pl_attractor depending on `kind`.
std::vector<double> attractor(std::span<const double> w, const PenaltyParams& params,
                              PenaltyKind kind);

}  // namespace vplms
