#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "allockit/cvar/scenarios.hpp"

namespace allockit::cvar {

enum class StrategyKind { unconstrained, long_only, box, equal_weight };

struct StrategyConstraint {
    StrategyKind kind = StrategyKind::long_only;
    double lower = -1.0;  ///< box only
    double upper = 1.0;   ///< box only

    static StrategyConstraint unconstrained() { return {StrategyKind::unconstrained}; }
    static StrategyConstraint long_only() { return {StrategyKind::long_only}; }
    static StrategyConstraint box(double lower = -1.0, double upper = 1.0) { return {StrategyKind::box, lower, upper}; }
    static StrategyConstraint equal_weight() { return {StrategyKind::equal_weight}; }

    /// Per-asset weight bounds implied by the strategy (infinite for unconstrained).
    double lower_bound() const;
    double upper_bound() const;
    void validate() const;
};

std::string_view to_string(StrategyKind kind);
/// Accepts unconstrained, long_only, box and equal_weight.
StrategyKind parse_strategy_kind(std::string_view name);

struct CvarReport {
    double alpha = 0.0;
    double var = 0.0;   ///< ζ at the optimum
    double cvar = 0.0;  ///< LP objective, i.e. the minimized CVaR
    WeightVector weights;
    double mean_return = 0.0;  ///< scenario-mean return of the weights
    bool fallback = false;     ///< ratio mode fell back to CVaR minimization
};

/// Minimizes CVaR_alpha over the strategy's feasible set via the linearization
/// min ζ + Σ p_s u_s / (1 − alpha), u_s ≥ −w·y_s − ζ, u_s ≥ 0, Σw = 1, optional w·E = μ.
///
/// equal_weight returns w = 1/N without solving. The unconstrained strategy needs a target
/// mean (ConfigError otherwise). Throws NumericError when the target is unattainable.
CvarReport minimize_cvar(const ScenarioMatrix& sc, double alpha, std::optional<double> target_mean,
                         const StrategyConstraint& strategy);

/// Maximizes mean return per unit of CVaR with the Charnes–Cooper transform
/// max E·v s.t. CVaR(v) ≤ 1, Σv = κ, κ·lower ≤ v ≤ κ·upper, κ ≥ 0, w = v/κ.
///
/// When the best ratio is not positive, or unbounded because some portfolio has
/// positive mean at nonpositive CVaR, the result falls back to `minimize_cvar` with
/// `fallback_mean` and `fallback` is set.
CvarReport maximize_return_per_cvar(const ScenarioMatrix& sc, double alpha, const StrategyConstraint& strategy,
                                    std::optional<double> fallback_mean = std::nullopt);

/// Evaluates a fixed portfolio: empirical VaR/CVaR and scenario mean.
CvarReport evaluate_portfolio(const ScenarioMatrix& sc, double alpha, const WeightVector& w);

}  // namespace allockit::cvar
