#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vplms/attractors.hpp"

namespace vplms {

enum class AlgoKind
{
    Lms,
    LpLms,
    LplLms,
    VpGseLms,
    VpGsePlLms,
    VpGsdLms,
};

inline constexpr std::array<AlgoKind, 6> kAllAlgorithms = {
    AlgoKind::Lms,      AlgoKind::LpLms,      AlgoKind::LplLms,
    AlgoKind::VpGseLms, AlgoKind::VpGsePlLms, AlgoKind::VpGsdLms,
};

/// Short identifier used in config files, CLI flags and CSV headers:
/// lms, lp, lpl, vp_gse, vp_gse_pl, vp_gsd.
std::string_view algo_name(AlgoKind kind);
std::optional<AlgoKind> parse_algo_name(std::string_view name);

bool is_variable_p(AlgoKind kind);
bool needs_true_weights(AlgoKind kind);
/// Penalty family of a sparse algorithm. Lp for plain LMS (unused there).
PenaltyKind penalty_kind(AlgoKind kind);

struct HyperParams
{
    double mu = 5e-2;
    /// For fixed-p algorithms `penalty.p` is the norm order used throughout.
    PenaltyParams penalty;
    /// Length T of the gradient-smoothing window.
    std::size_t smoothing_window = 5;
    double p_min = 0.05;
    double p0 = 1.0;
    /// Iterations before p may move; defaults to the smoothing window.
    std::optional<std::size_t> warmup;

    std::size_t effective_warmup() const { return warmup.value_or(smoothing_window); }
    void validate() const;
};

struct DeltaPiece
{
    /// One-based iteration from which `delta` applies.
    std::size_t start_iteration = 1;
    double delta = 0.0;
};

/// Step size of the p update as a function of iteration.
struct DeltaSchedule
{
    enum class Kind
    {
        LinearDecay,
        Piecewise,
    };

    Kind kind = Kind::Piecewise;
    /// LinearDecay: delta_1 and the per-iteration decrement u.
    double initial_delta = 0.0;
    double u = 0.0;
    /// Piecewise: strictly increasing start iterations.
    std::vector<DeltaPiece> pieces;

    void validate() const;
    /// Delta in effect at iteration 1.
    double initial() const;

    static DeltaSchedule linear(double initial_delta, double u);
    static DeltaSchedule constant(double delta);
    /// 0.01, 0.005, 0.003, 0.001 over consecutive 100-iteration blocks, then 0.
    static DeltaSchedule gse_default();
    /// 0 for iterations 1-10, then 0.05, 0.03, 0.02, 0.01 over 20-iteration
    /// blocks up to 90, 0.005 up to 200 and 0.001 afterwards.
    static DeltaSchedule gsd_default();
};

struct FilterState
{
    std::vector<double> w_est;
    double p = 1.0;
    double delta = 0.0;
    std::deque<double> grad_history;
    /// Completed weight updates.
    std::size_t iteration = 0;

    static FilterState initial(std::size_t num_taps, double p, double delta);
};

/// One (regressor, desired output) pair.
struct Observation
{
    std::span<const double> x;
    double y = 0.0;
};

/// y - w_est . x
double predict_error(const FilterState& state, std::span<const double> x, double y);

/// w_est += mu e x
void lms_step(FilterState& state, std::span<const double> x, double e, double mu);

/// w_est += mu e x - rho G(w_est), G the Lp attractor at the pre-update
/// weights and the fixed order hyper.penalty.p.
void lp_lms_step(FilterState& state, std::span<const double> x, double e,
                 const HyperParams& hyper);

/// As lp_lms_step with the p-norm-like attractor.
void lpl_lms_step(FilterState& state, std::span<const double> x, double e,
                  const HyperParams& hyper);

/// Linear decay: max(current_delta - u, 0). Piecewise: value of the last
/// piece starting at or before `iteration`, 0 before the first piece.
double delta_at(const DeltaSchedule& schedule, std::size_t iteration, double current_delta);

/// Pushes `gradient` into the smoothing window. Once the window holds T
/// values and the warm-up has elapsed, moves p by -delta * sign(mean) and
/// clamps to [p_min, 1]. Then advances delta for the next iteration.
void update_p(FilterState& state, double gradient, const DeltaSchedule& schedule,
              const HyperParams& hyper);

/// One iteration of a variable-p algorithm.
///
/// Updates the weights with the attractor at the current p, evaluates the
/// a-priori error of the new weights on `next`, forms the matching
/// gradient in p and passes it to update_p. Returns the gradient, or
/// nullopt when `next` is absent (final sample; p is left alone).
std::optional<double> vp_step(FilterState& state, AlgoKind kind, Observation current,
                              std::optional<Observation> next, const HyperParams& hyper,
                              const DeltaSchedule& schedule,
                              std::optional<std::span<const double>> w_true = std::nullopt);

/// Any of the six algorithms behind one interface.
class SparseLmsFilter
{
public:
    SparseLmsFilter(AlgoKind kind, std::size_t num_taps, HyperParams hyper,
                    DeltaSchedule schedule = DeltaSchedule::constant(0.0));

    /// Processes `current`. `next` feeds the gradient of the variable-p
    /// algorithms and is ignored by the others; `w_true` is required by
    /// VpGsdLms only.
    void step(Observation current, std::optional<Observation> next = std::nullopt,
              std::optional<std::span<const double>> w_true = std::nullopt);

    AlgoKind kind() const { return kind_; }
    const FilterState& state() const { return state_; }
    const HyperParams& hyper() const { return hyper_; }
    const DeltaSchedule& schedule() const { return schedule_; }

private:
    AlgoKind kind_;
    HyperParams hyper_;
    DeltaSchedule schedule_;
    FilterState state_;
};

}  // namespace vplms
