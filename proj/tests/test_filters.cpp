#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vplms/errors.hpp"
#include "vplms/filters.hpp"
#include "vplms/signal_model.hpp"

using namespace vplms;

namespace {

HyperParams table_hyper(double p0 = 1.0)
{
    HyperParams h;
    h.mu = 0.05;
    h.penalty.rho = 5e-4;
    h.penalty.epsilon = 0.05;
    h.penalty.p = 0.5;
    h.smoothing_window = 5;
    h.p0 = p0;
    return h;
}

// A short identification problem: sparse system, white input, 20 dB noise.
struct Problem
{
    TrueWeights system;
    SignalStream input;
    std::vector<double> y;

    explicit Problem(std::uint64_t seed, std::size_t taps = 16, std::size_t nonzero = 2,
                     std::size_t length = 300)
    {
        Rng rng{seed};
        system = generate_sparse_weights({taps, nonzero, 0.0, 1.0, seed}, rng);
        input = generate_white_gaussian(length, 1.0, rng);
        const SignalStream noise = generate_white_gaussian(length, 0.01, rng);
        y.assign(length, 0.0);
        for (std::size_t k = taps; k <= length; ++k) {
            y[k - 1] = system_output(system, regressor(input, k, taps), noise.samples[k - 1]);
        }
    }

    std::size_t taps() const { return system.coefficients.size(); }

    // Runs `filter` over the whole stream, returning the weight trajectory.
    std::vector<std::vector<double>> run(SparseLmsFilter& filter) const
    {
        std::vector<std::vector<double>> traj;
        const std::size_t n = taps();
        for (std::size_t k = n; k <= input.samples.size(); ++k) {
            const auto x = regressor(input, k, n);
            std::vector<double> x_next;
            std::optional<Observation> next;
            if (k < input.samples.size()) {
                x_next = regressor(input, k + 1, n);
                next = Observation{x_next, y[k]};
            }
            filter.step({x, y[k - 1]}, next, std::span<const double>(system.coefficients));
            traj.push_back(filter.state().w_est);
        }
        return traj;
    }
};

}  // namespace

TEST(PredictError, Examples)
{
    FilterState s = FilterState::initial(2, 0.5, 0.0);
    EXPECT_DOUBLE_EQ(predict_error(s, std::vector<double>{3, 4}, 1.5), 1.5);

    s.w_est = {0.5, -1.0};
    const std::vector<double> x{2.0, 1.0};
    EXPECT_EQ(predict_error(s, x, 0.5 * 2.0 - 1.0), 0.0);

    FilterState one = FilterState::initial(1, 0.5, 0.0);
    one.w_est = {0.5};
    EXPECT_NEAR(predict_error(one, std::vector<double>{2}, 1.2), 0.2, 1e-15);
    EXPECT_THROW(predict_error(one, std::vector<double>{1, 2}, 0.0), DimensionError);
}

TEST(LmsStep, Examples)
{
    FilterState s = FilterState::initial(1, 0.5, 0.0);
    s.w_est = {0.3};
    lms_step(s, std::vector<double>{1.0}, 0.0, 0.05);
    EXPECT_EQ(s.w_est[0], 0.3);
    lms_step(s, std::vector<double>{1.0}, 1.0, 0.0);
    EXPECT_EQ(s.w_est[0], 0.3);
    EXPECT_EQ(s.iteration, 2u);

    FilterState z = FilterState::initial(1, 0.5, 0.0);
    lms_step(z, std::vector<double>{1.0}, 1.0, 0.05);
    EXPECT_DOUBLE_EQ(z.w_est[0], 0.05);
}

TEST(SparseSteps, ReduceToLmsWithoutPenaltyOrAtStartup)
{
    const std::vector<double> x{0.7, -1.2, 0.4};
    HyperParams h = table_hyper();
    for (auto step : {lp_lms_step, lpl_lms_step}) {
        // startup: w = 0, attractor silent
        FilterState a = FilterState::initial(3, 0.5, 0.0);
        FilterState b = a;
        step(a, x, 0.9, h);
        lms_step(b, x, 0.9, h.mu);
        EXPECT_EQ(a.w_est, b.w_est);

        // rho = 0 from an arbitrary state
        HyperParams off = h;
        off.penalty.rho = 0.0;
        FilterState c = FilterState::initial(3, 0.5, 0.0);
        c.w_est = {0.2, -0.01, 1.5};
        FilterState d = c;
        step(c, x, -0.4, off);
        lms_step(d, x, -0.4, off.mu);
        EXPECT_EQ(c.w_est, d.w_est);
    }
}

TEST(SparseSteps, SingleTapHandExamples)
{
    const HyperParams h = table_hyper();
    FilterState lp = FilterState::initial(1, 0.5, 0.0);
    lp.w_est = {1.0};
    lp_lms_step(lp, std::vector<double>{0.0}, 0.0, h);
    EXPECT_NEAR(lp.w_est[0], 1.0 - 5e-4 / 1.05, 1e-15);

    FilterState pl = FilterState::initial(1, 0.5, 0.0);
    pl.w_est = {1.0};
    lpl_lms_step(pl, std::vector<double>{0.0}, 0.0, h);
    EXPECT_NEAR(pl.w_est[0], 1.0 - 5e-4 * 0.5 / 1.05, 1e-15);
}

TEST(SparseSteps, DecomposeIntoLmsMinusAttractor)
{
    std::mt19937_64 rng{4};
    std::normal_distribution<double> g;
    const HyperParams h = table_hyper();
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> w(8), x(8);
        for (std::size_t i = 0; i < 8; ++i) {
            w[i] = g(rng);
            x[i] = g(rng);
        }
        const double e = g(rng);
        for (PenaltyKind kind : {PenaltyKind::Lp, PenaltyKind::PNormLike}) {
            FilterState sparse = FilterState::initial(8, 0.5, 0.0);
            sparse.w_est = w;
            FilterState plain = sparse;
            if (kind == PenaltyKind::Lp) {
                lp_lms_step(sparse, x, e, h);
            } else {
                lpl_lms_step(sparse, x, e, h);
            }
            lms_step(plain, x, e, h.mu);
            const auto att = attractor(w, h.penalty, kind);
            for (std::size_t i = 0; i < 8; ++i) {
                EXPECT_NEAR(sparse.w_est[i], plain.w_est[i] - h.penalty.rho * att[i], 1e-15);
            }
        }
    }
}

TEST(DeltaSchedule, DefaultPlans)
{
    const DeltaSchedule gse = DeltaSchedule::gse_default();
    EXPECT_EQ(delta_at(gse, 1, 0.0), 0.01);
    EXPECT_EQ(delta_at(gse, 100, 0.0), 0.01);
    EXPECT_EQ(delta_at(gse, 150, 0.0), 0.005);
    EXPECT_EQ(delta_at(gse, 250, 0.0), 0.003);
    EXPECT_EQ(delta_at(gse, 350, 0.0), 0.001);
    EXPECT_EQ(delta_at(gse, 450, 0.0), 0.0);

    const DeltaSchedule gsd = DeltaSchedule::gsd_default();
    EXPECT_EQ(delta_at(gsd, 10, 0.0), 0.0);
    EXPECT_EQ(delta_at(gsd, 11, 0.0), 0.05);
    EXPECT_EQ(delta_at(gsd, 31, 0.0), 0.03);
    EXPECT_EQ(delta_at(gsd, 60, 0.0), 0.02);
    EXPECT_EQ(delta_at(gsd, 90, 0.0), 0.01);
    EXPECT_EQ(delta_at(gsd, 91, 0.0), 0.005);
    EXPECT_EQ(delta_at(gsd, 200, 0.0), 0.005);
    EXPECT_EQ(delta_at(gsd, 201, 0.0), 0.001);
    EXPECT_EQ(delta_at(gsd, 485, 0.0), 0.001);
}

TEST(DeltaSchedule, LinearDecayClampsAtZero)
{
    const DeltaSchedule lin = DeltaSchedule::linear(0.01, 0.001);
    EXPECT_NEAR(delta_at(lin, 7, 0.01), 0.009, 1e-15);
    EXPECT_EQ(delta_at(lin, 7, 0.0005), 0.0);
}

TEST(DeltaSchedule, PiecewiseBeforeFirstPieceIsZero)
{
    DeltaSchedule s;
    s.pieces = {{20, 0.1}};
    EXPECT_EQ(delta_at(s, 19, 0.7), 0.0);
    EXPECT_EQ(delta_at(s, 20, 0.7), 0.1);
}

TEST(DeltaSchedule, Validation)
{
    DeltaSchedule s;
    s.pieces = {{5, 0.1}, {5, 0.2}};
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.pieces = {{5, -0.1}};
    EXPECT_THROW(s.validate(), InvalidArgument);
    EXPECT_THROW(DeltaSchedule::linear(-1.0, 0.0).validate(), InvalidArgument);
}

TEST(UpdateP, PositiveSmoothedGradientLowersP)
{
    HyperParams h = table_hyper();
    FilterState s = FilterState::initial(2, 0.8, 0.01);
    const DeltaSchedule sched = DeltaSchedule::constant(0.01);
    for (int i = 0; i < 4; ++i) {
        ++s.iteration;
        update_p(s, 1.0 + i, sched, h);
        EXPECT_EQ(s.p, 0.8) << "window not yet full";
    }
    ++s.iteration;
    update_p(s, 2.0, sched, h);
    EXPECT_EQ(s.p, 0.8 - 0.01);
    EXPECT_EQ(s.grad_history.size(), 5u);
}

TEST(UpdateP, ZeroMeanLeavesPUnchanged)
{
    HyperParams h = table_hyper();
    FilterState s = FilterState::initial(2, 0.7, 0.01);
    const DeltaSchedule sched = DeltaSchedule::constant(0.01);
    for (double g : {1.0, -1.0, 2.0, -2.0, 0.0}) {
        ++s.iteration;
        update_p(s, g, sched, h);
    }
    EXPECT_EQ(s.p, 0.7);
}

TEST(UpdateP, ClampsAtBounds)
{
    HyperParams h = table_hyper();
    const DeltaSchedule sched = DeltaSchedule::constant(0.05);
    FilterState low = FilterState::initial(2, h.p_min, 0.05);
    FilterState high = FilterState::initial(2, 1.0, 0.05);
    for (int i = 0; i < 20; ++i) {
        ++low.iteration;
        ++high.iteration;
        update_p(low, 1.0, sched, h);
        update_p(high, -1.0, sched, h);
        EXPECT_EQ(low.p, h.p_min);
        EXPECT_EQ(high.p, 1.0);
        EXPECT_LE(low.grad_history.size(), h.smoothing_window);
    }
}

TEST(UpdateP, WarmupDelaysUpdates)
{
    HyperParams h = table_hyper();
    h.warmup = 8;
    FilterState s = FilterState::initial(2, 0.9, 0.01);
    const DeltaSchedule sched = DeltaSchedule::constant(0.01);
    for (int i = 1; i <= 7; ++i) {
        ++s.iteration;
        update_p(s, 1.0, sched, h);
    }
    EXPECT_EQ(s.p, 0.9);
    ++s.iteration;
    update_p(s, 1.0, sched, h);
    EXPECT_EQ(s.p, 0.9 - 0.01);
}

TEST(UpdateP, DeltaFollowsSchedule)
{
    HyperParams h = table_hyper();
    FilterState s = FilterState::initial(2, 0.9, 0.02);
    const DeltaSchedule lin = DeltaSchedule::linear(0.02, 0.005);
    ++s.iteration;
    update_p(s, 1.0, lin, h);
    EXPECT_NEAR(s.delta, 0.015, 1e-15);

    const DeltaSchedule gse = DeltaSchedule::gse_default();
    FilterState t = FilterState::initial(2, 0.9, gse.initial());
    t.iteration = 100;
    update_p(t, 1.0, gse, h);
    EXPECT_EQ(t.delta, 0.005);
}

TEST(VpStep, RequiresVariablePKindAndTruthForGsd)
{
    FilterState s = FilterState::initial(1, 1.0, 0.01);
    const std::vector<double> x{1.0};
    const HyperParams h = table_hyper();
    const DeltaSchedule sched = DeltaSchedule::constant(0.01);
    EXPECT_THROW(vp_step(s, AlgoKind::LpLms, {x, 1.0}, std::nullopt, h, sched), InvalidArgument);
    EXPECT_THROW(vp_step(s, AlgoKind::VpGsdLms, {x, 1.0}, Observation{x, 1.0}, h, sched),
                 OracleUnavailable);
}

TEST(VpStep, FinalSampleSkipsPUpdate)
{
    FilterState s = FilterState::initial(1, 1.0, 0.01);
    s.w_est = {0.4};
    const std::vector<double> x{1.0};
    const auto g = vp_step(s, AlgoKind::VpGseLms, {x, 1.0}, std::nullopt, table_hyper(),
                           DeltaSchedule::constant(0.01));
    EXPECT_FALSE(g.has_value());
    EXPECT_TRUE(s.grad_history.empty());
    EXPECT_EQ(s.iteration, 1u);
}

TEST(Filters, WithoutPenaltyAllSixMatchLmsBitForBit)
{
    const Problem prob(31);
    HyperParams h = table_hyper();
    h.penalty.rho = 0.0;
    SparseLmsFilter lms(AlgoKind::Lms, prob.taps(), h);
    const auto reference = prob.run(lms);
    for (AlgoKind kind : kAllAlgorithms) {
        DeltaSchedule sched = kind == AlgoKind::VpGsdLms ? DeltaSchedule::gsd_default()
                                                         : DeltaSchedule::gse_default();
        SparseLmsFilter f(kind, prob.taps(), h, sched);
        EXPECT_EQ(prob.run(f), reference) << algo_name(kind);
        if (is_variable_p(kind)) {
            EXPECT_EQ(f.state().p, h.p0) << "p moved without a penalty";
        }
    }
}

TEST(Filters, FrozenDeltaReproducesFixedP)
{
    const Problem prob(5, 16, 3);
    for (double p0 : {1.0, 0.7, 0.5}) {
        HyperParams h = table_hyper(p0);
        h.penalty.p = p0;
        SparseLmsFilter lp(AlgoKind::LpLms, prob.taps(), h);
        SparseLmsFilter vp(AlgoKind::VpGseLms, prob.taps(), h, DeltaSchedule::constant(0.0));
        EXPECT_EQ(prob.run(vp), prob.run(lp));

        SparseLmsFilter lpl(AlgoKind::LplLms, prob.taps(), h);
        SparseLmsFilter vppl(AlgoKind::VpGsePlLms, prob.taps(), h, DeltaSchedule::constant(0.0));
        EXPECT_EQ(prob.run(vppl), prob.run(lpl));
    }
}

TEST(Filters, PStaysInRangeAndWeightsFinite)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Problem prob(seed, 16, 1 + seed % 16, 500);
        for (AlgoKind kind : {AlgoKind::VpGseLms, AlgoKind::VpGsePlLms, AlgoKind::VpGsdLms}) {
            HyperParams h = table_hyper(kind == AlgoKind::VpGsdLms ? 0.5 : 1.0);
            SparseLmsFilter f(kind, prob.taps(), h,
                              kind == AlgoKind::VpGsdLms ? DeltaSchedule::gsd_default()
                                                         : DeltaSchedule::gse_default());
            for (const auto& w : prob.run(f)) {
                for (double v : w) {
                    ASSERT_TRUE(std::isfinite(v));
                }
            }
            EXPECT_GE(f.state().p, h.p_min);
            EXPECT_LE(f.state().p, 1.0);
        }
    }
}

TEST(Filters, ConstructorValidates)
{
    HyperParams h = table_hyper();
    h.p0 = 0.01;
    EXPECT_THROW(SparseLmsFilter(AlgoKind::VpGseLms, 4, h), InvalidArgument);
    EXPECT_THROW(SparseLmsFilter(AlgoKind::Lms, 0, table_hyper()), InvalidArgument);
}

TEST(AlgoNames, RoundTrip)
{
    for (AlgoKind kind : kAllAlgorithms) {
        EXPECT_EQ(parse_algo_name(algo_name(kind)), kind);
    }
    EXPECT_FALSE(parse_algo_name("l0").has_value());
}
