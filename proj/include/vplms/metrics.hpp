#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vplms/attractors.hpp"
#include "vplms/filters.hpp"

namespace vplms {

/// Per-iteration record of one algorithm in one Monte-Carlo run.
struct RunTrace
{
    AlgoKind algo = AlgoKind::Lms;
    /// ||w - w_k||^2 after each weight update.
    std::vector<double> msd;
    /// Order p in effect for each update; empty for fixed-p algorithms.
    std::vector<double> p;
    std::uint64_t run_seed = 0;
};

struct EnsembleTrace
{
    AlgoKind algo = AlgoKind::Lms;
    std::vector<double> mean_msd;
    std::vector<double> mean_p;
    std::size_t num_runs = 0;
};

/// sum_i (a_i - b_i)^2
double squared_deviation(std::span<const double> w_true, std::span<const double> w_est);

/// Pointwise mean over runs of one algorithm. Throws InvalidArgument for an
/// empty set or mixed algorithms, DimensionError for unequal lengths.
EnsembleTrace ensemble_average(std::span<const RunTrace> traces);

/// Mean of the last `tail_window` ensemble MSD values.
double steady_state_msd(const EnsembleTrace& trace, std::size_t tail_window);

/// Dense row-major n x n matrix, enough for input covariances.
class SquareMatrix
{
public:
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static SquareMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    std::vector<double> multiply(std::span<const double> v) const;

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// One step of the mean-misalignment recursion
///
///   E[v_{k+1}] = (I - mu R) E[v_k] - rho G(w_snapshot)
///
/// with G the attractor of `kind` evaluated at a caller-supplied weight
/// snapshot (typically the empirical ensemble mean).
std::vector<double> mean_misalignment_step(std::span<const double> v_mean, const SquareMatrix& R,
                                           double mu, const PenaltyParams& penalty,
                                           std::span<const double> w_snapshot, PenaltyKind kind);

}  // namespace vplms
