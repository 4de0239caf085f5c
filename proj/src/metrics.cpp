#include "vplms/metrics.hpp"

#include <numeric>
#include <string>

#include "vplms/errors.hpp"

namespace vplms {

double squared_deviation(std::span<const double> w_true, std::span<const double> w_est)
{
    if (w_true.size() != w_est.size()) {
        throw DimensionError("squared deviation: lengths " + std::to_string(w_true.size())
                             + " and " + std::to_string(w_est.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < w_true.size(); ++i) {
        const double d = w_true[i] - w_est[i];
        acc += d * d;
    }
    return acc;
}

EnsembleTrace ensemble_average(std::span<const RunTrace> traces)
{
    if (traces.empty()) {
        throw InvalidArgument("ensemble average: no traces");
    }
    const RunTrace& first = traces.front();
    EnsembleTrace out;
    out.algo = first.algo;
    out.num_runs = traces.size();
    out.mean_msd.assign(first.msd.size(), 0.0);
    out.mean_p.assign(first.p.size(), 0.0);

    for (const RunTrace& t : traces) {
        if (t.algo != first.algo) {
            throw InvalidArgument("ensemble average: traces mix algorithms");
        }
        if (t.msd.size() != first.msd.size() || t.p.size() != first.p.size()) {
            throw DimensionError("ensemble average: trace lengths differ");
        }
        for (std::size_t i = 0; i < t.msd.size(); ++i) {
            out.mean_msd[i] += t.msd[i];
        }
        for (std::size_t i = 0; i < t.p.size(); ++i) {
            out.mean_p[i] += t.p[i];
        }
    }
    const double n = static_cast<double>(traces.size());
    for (double& v : out.mean_msd) {
        v /= n;
    }
    for (double& v : out.mean_p) {
        v /= n;
    }
    return out;
}

double steady_state_msd(const EnsembleTrace& trace, std::size_t tail_window)
{
    const auto& msd = trace.mean_msd;
    if (tail_window == 0 || tail_window > msd.size()) {
        throw InvalidArgument("steady state: window " + std::to_string(tail_window)
                              + " does not fit a trace of length " + std::to_string(msd.size()));
    }
    const auto begin = msd.end() - static_cast<std::ptrdiff_t>(tail_window);
    return std::accumulate(begin, msd.end(), 0.0) / static_cast<double>(tail_window);
}

SquareMatrix SquareMatrix::identity(std::size_t n)
{
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

std::vector<double> SquareMatrix::multiply(std::span<const double> v) const
{
    if (v.size() != n_) {
        throw DimensionError("matrix-vector product: vector length mismatch");
    }
    std::vector<double> out(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n_; ++c) {
            acc += (*this)(r, c) * v[c];
        }
        out[r] = acc;
    }
    return out;
}

std::vector<double> mean_misalignment_step(std::span<const double> v_mean, const SquareMatrix& R,
                                           double mu, const PenaltyParams& penalty,
                                           std::span<const double> w_snapshot, PenaltyKind kind)
{
    if (v_mean.size() != R.size() || w_snapshot.size() != R.size()) {
        throw DimensionError("mean misalignment: dimensions disagree");
    }
    SquareMatrix contraction(R.size());
    for (std::size_t r = 0; r < R.size(); ++r) {
        for (std::size_t c = 0; c < R.size(); ++c) {
            contraction(r, c) = (r == c ? 1.0 : 0.0) - mu * R(r, c);
        }
    }
    std::vector<double> out = contraction.multiply(v_mean);
    const std::vector<double> g = attractor(w_snapshot, penalty, kind);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] -= penalty.rho * g[i];
    }
    return out;
}

}  // namespace vplms
