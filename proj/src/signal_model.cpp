#include "vplms/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vplms/errors.hpp"

namespace vplms {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept
{
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream_id)
{
    return Rng{mix_seed(seed, stream_id)};
}

void SparseSystemSpec::validate() const
{
    if (num_taps == 0) {
        throw InvalidArgument("sparse system spec: num_taps must be positive");
    }
    if (num_nonzero < 1 || num_nonzero > num_taps) {
        throw InvalidArgument("sparse system spec: num_nonzero must lie in [1, num_taps], got "
                              + std::to_string(num_nonzero) + " for "
                              + std::to_string(num_taps) + " taps");
    }
    if (!(coeff_variance > 0.0)) {
        throw InvalidArgument("sparse system spec: coeff_variance must be positive");
    }
}

TrueWeights generate_sparse_weights(const SparseSystemSpec& spec, Rng& rng)
{
    spec.validate();

    // Partial Fisher-Yates: the first S slots become the support.
    std::vector<std::size_t> slots(spec.num_taps);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t i = 0; i < spec.num_nonzero; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, spec.num_taps - 1);
        std::swap(slots[i], slots[pick(rng)]);
    }

    TrueWeights w;
    w.coefficients.assign(spec.num_taps, 0.0);
    w.support.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(spec.num_nonzero));
    std::sort(w.support.begin(), w.support.end());

    std::normal_distribution<double> coeff(spec.coeff_mean, std::sqrt(spec.coeff_variance));
    for (std::size_t idx : w.support) {
        double value = 0.0;
        while (value == 0.0) {
            value = coeff(rng);
        }
        w.coefficients[idx] = value;
    }
    return w;
}

TrueWeights generate_sparse_weights(const SparseSystemSpec& spec)
{
    Rng rng{spec.seed};
    return generate_sparse_weights(spec, rng);
}

SignalStream generate_white_gaussian(std::size_t length, double variance, Rng& rng)
{
    if (length == 0) {
        throw InvalidArgument("white gaussian stream: length must be positive");
    }
    if (!(variance > 0.0)) {
        throw InvalidArgument("white gaussian stream: variance must be positive");
    }
    std::normal_distribution<double> dist(0.0, std::sqrt(variance));
    SignalStream s;
    s.variance = variance;
    s.samples.resize(length);
    for (auto& x : s.samples) {
        x = dist(rng);
    }
    return s;
}

double snr_to_noise_variance(double snr_db, double signal_variance)
{
    if (!(signal_variance > 0.0)) {
        throw InvalidArgument("snr conversion: signal variance must be positive");
    }
    return signal_variance / std::pow(10.0, snr_db / 10.0);
}

std::vector<double> regressor(const SignalStream& stream, std::size_t k, std::size_t num_taps)
{
    if (num_taps == 0) {
        throw InvalidArgument("regressor: num_taps must be positive");
    }
    if (k < num_taps) {
        throw WindowUnavailable("regressor: time index " + std::to_string(k)
                                + " has fewer than " + std::to_string(num_taps)
                                + " past samples");
    }
    if (k > stream.samples.size()) {
        throw InvalidArgument("regressor: time index " + std::to_string(k)
                              + " beyond stream length " + std::to_string(stream.samples.size()));
    }
    std::vector<double> x(num_taps);
    for (std::size_t i = 0; i < num_taps; ++i) {
        x[i] = stream.samples[k - 1 - i];
    }
    return x;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw DimensionError("inner product of lengths " + std::to_string(a.size()) + " and "
                             + std::to_string(b.size()));
    }
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double system_output(std::span<const double> weights,
                     std::span<const double> regressor,
                     double noise_sample)
{
    return dot(weights, regressor) + noise_sample;
}

}  // namespace vplms
