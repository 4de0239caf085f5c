#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "vplms/errors.hpp"
#include "vplms/signal_model.hpp"

using namespace vplms;

namespace {

std::size_t count_nonzero(const std::vector<double>& v)
{
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

}  // namespace

TEST(SparseWeights, FullySupportedSystem)
{
    SparseSystemSpec spec;
    spec.num_taps = 16;
    spec.num_nonzero = 16;
    spec.seed = 3;
    const TrueWeights w = generate_sparse_weights(spec);
    EXPECT_EQ(w.coefficients.size(), 16u);
    EXPECT_EQ(count_nonzero(w.coefficients), 16u);
    EXPECT_EQ(w.support.size(), 16u);
}

TEST(SparseWeights, SingleTap)
{
    SparseSystemSpec spec;
    spec.num_nonzero = 1;
    spec.seed = 11;
    const TrueWeights w = generate_sparse_weights(spec);
    ASSERT_EQ(w.support.size(), 1u);
    EXPECT_EQ(count_nonzero(w.coefficients), 1u);
    EXPECT_NE(w.coefficients[w.support[0]], 0.0);
}

TEST(SparseWeights, SameSeedIsBitIdentical)
{
    SparseSystemSpec spec;
    spec.num_nonzero = 4;
    spec.seed = 42;
    const TrueWeights a = generate_sparse_weights(spec);
    const TrueWeights b = generate_sparse_weights(spec);
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_EQ(a.support, b.support);
}

TEST(SparseWeights, RejectsInvalidSpecs)
{
    SparseSystemSpec spec;
    spec.num_nonzero = 17;
    EXPECT_THROW(generate_sparse_weights(spec), InvalidArgument);
    spec.num_nonzero = 0;
    EXPECT_THROW(generate_sparse_weights(spec), InvalidArgument);
    spec.num_nonzero = 3;
    spec.coeff_variance = 0.0;
    EXPECT_THROW(generate_sparse_weights(spec), InvalidArgument);
}

TEST(SparseWeights, SupportInvariantAcrossSeeds)
{
    for (std::size_t n : {1u, 5u, 16u, 33u}) {
        for (std::size_t s = 1; s <= n; s += 3) {
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                SparseSystemSpec spec{n, s, 0.0, 1.0, seed};
                const TrueWeights w = generate_sparse_weights(spec);
                ASSERT_EQ(count_nonzero(w.coefficients), s);
                ASSERT_EQ(w.support.size(), s);
                ASSERT_TRUE(std::is_sorted(w.support.begin(), w.support.end()));
                for (std::size_t idx : w.support) {
                    ASSERT_LT(idx, n);
                    ASSERT_NE(w.coefficients[idx], 0.0);
                }
            }
        }
    }
}

TEST(SparseWeights, SupportPositionsAreUniform)
{
    // Each of 16 positions should hold the single nonzero tap ~1/16 of the time.
    std::vector<int> hits(16, 0);
    const int draws = 16000;
    Rng rng{5};
    for (int i = 0; i < draws; ++i) {
        const TrueWeights w = generate_sparse_weights({16, 1, 0.0, 1.0, 0}, rng);
        ++hits[w.support[0]];
    }
    for (int h : hits) {
        EXPECT_NEAR(h, 1000, 150);
    }
}

TEST(WhiteGaussian, PaperStreams)
{
    Rng rng = make_rng(1, 0);
    const SignalStream input = generate_white_gaussian(500, 1.0, rng);
    const SignalStream noise = generate_white_gaussian(500, 0.01, rng);
    EXPECT_EQ(input.samples.size(), 500u);
    EXPECT_EQ(noise.samples.size(), 500u);
    EXPECT_DOUBLE_EQ(noise.variance, 0.01);
}

TEST(WhiteGaussian, SampleMomentsOfLargeStream)
{
    Rng rng{2024};
    const SignalStream s = generate_white_gaussian(1'000'000, 1.0, rng);
    const double mean = std::accumulate(s.samples.begin(), s.samples.end(), 0.0) / 1e6;
    EXPECT_NEAR(mean, 0.0, 0.01);
    double var = 0.0;
    for (double x : s.samples) {
        var += (x - mean) * (x - mean);
    }
    EXPECT_NEAR(var / 1e6, 1.0, 0.01);
}

TEST(WhiteGaussian, RejectsBadArguments)
{
    Rng rng{1};
    EXPECT_THROW(generate_white_gaussian(0, 1.0, rng), InvalidArgument);
    EXPECT_THROW(generate_white_gaussian(10, 0.0, rng), InvalidArgument);
    EXPECT_THROW(generate_white_gaussian(10, -1.0, rng), InvalidArgument);
}

TEST(WhiteGaussian, Reproducible)
{
    Rng a = make_rng(9, 3);
    Rng b = make_rng(9, 3);
    EXPECT_EQ(generate_white_gaussian(200, 0.5, a).samples,
              generate_white_gaussian(200, 0.5, b).samples);
    Rng c = make_rng(9, 4);
    Rng d = make_rng(9, 3);
    EXPECT_NE(generate_white_gaussian(200, 0.5, c).samples,
              generate_white_gaussian(200, 0.5, d).samples);
}

TEST(SnrConversion, Examples)
{
    EXPECT_NEAR(snr_to_noise_variance(20.0, 1.0), 0.01, 1e-15);
    EXPECT_DOUBLE_EQ(snr_to_noise_variance(0.0, 1.0), 1.0);
    EXPECT_NEAR(snr_to_noise_variance(10.0, 2.0), 0.2, 1e-15);
    EXPECT_THROW(snr_to_noise_variance(10.0, 0.0), InvalidArgument);
}

TEST(Regressor, Windowing)
{
    const SignalStream s{{1, 2, 3, 4}, 1.0};
    EXPECT_EQ(regressor(s, 4, 2), (std::vector<double>{4, 3}));
    EXPECT_THROW(regressor(s, 2, 3), WindowUnavailable);
    EXPECT_THROW(regressor(s, 5, 2), InvalidArgument);
}

TEST(Regressor, LastWindowOfLongStream)
{
    SignalStream s;
    s.samples.resize(500);
    std::iota(s.samples.begin(), s.samples.end(), 1.0);
    const auto x = regressor(s, 500, 16);
    ASSERT_EQ(x.size(), 16u);
    for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_EQ(x[i], 500.0 - static_cast<double>(i));
    }
}

TEST(SystemOutput, Examples)
{
    const std::vector<double> zeros(3, 0.0);
    const std::vector<double> any{0.4, -2.0, 7.0};
    EXPECT_DOUBLE_EQ(system_output(zeros, any, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(system_output(std::vector<double>{1, 0}, std::vector<double>{2, 5}, 0.0), 2.0);
    EXPECT_DOUBLE_EQ(system_output(std::vector<double>{0.5, -0.5}, std::vector<double>{2, 2}, 0.1),
                     0.1);
    EXPECT_THROW(system_output(std::vector<double>{1, 2}, std::vector<double>{1}, 0.0),
                 DimensionError);
}

TEST(SystemOutput, LinearInRegressor)
{
    Rng rng{77};
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> w(16), x1(16), x2(16), mix(16);
        for (std::size_t i = 0; i < 16; ++i) {
            w[i] = g(rng);
            x1[i] = g(rng);
            x2[i] = g(rng);
        }
        const double a = g(rng);
        const double b = g(rng);
        for (std::size_t i = 0; i < 16; ++i) {
            mix[i] = a * x1[i] + b * x2[i];
        }
        const double lhs = system_output(w, mix, 0.0);
        const double rhs = a * system_output(w, x1, 0.0) + b * system_output(w, x2, 0.0);
        EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(lhs)));
    }
}
