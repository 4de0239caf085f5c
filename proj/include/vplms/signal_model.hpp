#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace vplms {

/// Random engine used for every generated quantity.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer applied to the combination of two words.
///
/// Used to derive statistically independent sub-stream seeds from a base
/// seed and an index (Monte-Carlo run, sparsity level, stream id).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

/// Engine for sub-stream `stream_id` of `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t stream_id);

struct SparseSystemSpec
{
    std::size_t num_taps = 16;
    std::size_t num_nonzero = 1;
    double coeff_mean = 0.0;
    double coeff_variance = 1.0;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument unless 1 <= num_nonzero <= num_taps and
    /// coeff_variance > 0.
    void validate() const;

    double sparsity_ratio() const
    {
        return static_cast<double>(num_nonzero) / static_cast<double>(num_taps);
    }
};

/// Sparse impulse response of the unknown FIR system.
struct TrueWeights
{
    std::vector<double> coefficients;
    /// Zero-based indices of the nonzero taps, ascending.
    std::vector<std::size_t> support;
};

struct SignalStream
{
    std::vector<double> samples;
    double variance = 1.0;
};

/// Draws the support uniformly without replacement and fills it with
/// i.i.d. Gaussian values. Exact zeros are redrawn so that the support
/// invariant holds.
TrueWeights generate_sparse_weights(const SparseSystemSpec& spec, Rng& rng);

/// Same as above with an engine seeded from `spec.seed`.
TrueWeights generate_sparse_weights(const SparseSystemSpec& spec);

SignalStream generate_white_gaussian(std::size_t length, double variance, Rng& rng);

/// signal_variance / 10^(snr_db / 10).
double snr_to_noise_variance(double snr_db, double signal_variance);

/// Tapped-delay-line regressor [x_k, x_{k-1}, ..., x_{k-N+1}].
///
/// `k` is the one-based time index into the stream, so the most recent
/// sample is `stream.samples[k - 1]`. Only full windows are produced:
/// k < N throws WindowUnavailable, k > L throws InvalidArgument.
std::vector<double> regressor(const SignalStream& stream, std::size_t k, std::size_t num_taps);

/// w . x + noise.
double system_output(std::span<const double> weights,
                     std::span<const double> regressor,
                     double noise_sample);

inline double system_output(const TrueWeights& w,
                            std::span<const double> regressor,
                            double noise_sample)
{
    return system_output(w.coefficients, regressor, noise_sample);
}

/// Inner product with a length check.
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace vplms
