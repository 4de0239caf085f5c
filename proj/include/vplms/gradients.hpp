#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vplms/attractors.hpp"

namespace vplms {

/// Quantities entering one gradient-in-p evaluation.
///
/// The attractor acted on `w_prev` to produce `w_next`; `e_next` is the
/// a-priori error of `w_next` on the following sample `x_next`.
struct GradContext
{
    std::span<const double> w_prev;
    double e_next = 0.0;
    std::span<const double> x_next;
    std::optional<std::span<const double>> w_true;
    std::optional<std::span<const double>> w_next;
    PenaltyParams params;
};

/// d ||w||_p / dp over the entries above zero_floor.
double d_lp_norm_dp(std::span<const double> w, double p, double zero_floor = kDefaultZeroFloor);

/// Elementwise dG/dp of lp_attractor, with w held fixed.
///
/// Writing a = ||w||_p^(1-p), b_i = eps + |w_i|^(1-p), S = sum_j |w_j|^p,
///
///   d ln a / dp = C / p,   C = (1-p) sum_j |w_j|^p ln|w_j| / S - ln ||w||_p
///   dG_i / dp  = sign(w_i) a (C b_i / p + |w_i|^(1-p) ln|w_i|) / b_i^2
///
/// The logarithm in the last term is elementwise.
std::vector<double> d_lp_attractor_dp(std::span<const double> w, const PenaltyParams& params);

/// Elementwise dG/dp of pl_attractor:
///
///   dG_i / dp = sign(w_i) (b_i + p |w_i|^(1-p) ln|w_i|) / b_i^2
std::vector<double> d_pl_attractor_dp(std::span<const double> w, const PenaltyParams& params);

/// d(e_next^2)/dp for w_next = w_prev + mu e x - rho G(w_prev, p):
/// 2 rho e_next (x_next . dGdp).
double gse_gradient(const GradContext& ctx, std::span<const double> dGdp);

/// Same assembly, fed with the p-norm-like attractor derivative.
double gse_pl_gradient(const GradContext& ctx, std::span<const double> dGdp);

/// d||w_true - w_next||^2/dp = 2 rho sum_i (w_true_i - w_next_i) dGdp_i.
/// Needs the true system; throws OracleUnavailable without it.
double gsd_gradient(const GradContext& ctx, std::span<const double> dGdp);

/// Central difference (f(p+h) - f(p-h)) / 2h.
/// Throws DomainError unless 0 < p-h and p+h < 1.
double fd_gradient_oracle(const std::function<double(double)>& f, double p, double h);

std::vector<double> d_attractor_dp(std::span<const double> w, const PenaltyParams& params,
                                   PenaltyKind kind);

}  // namespace vplms
