#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "allockit/cvar/optimizer.hpp"
#include "allockit/meanvar/frontier.hpp"
#include "allockit/regime/model.hpp"

namespace allockit::regime {

enum class AllocationMethod { meanvar, cvar };

/// gmv: global minimum variance. target_mean: efficient portfolio at a fixed μ.
/// risk_tolerance: efficient portfolio whose multiplier λ equals τ, so μ_s = B_s/C_s + τ·D_s/C_s.
enum class MeanVarTarget { gmv, target_mean, risk_tolerance };

struct AllocationParams {
    AllocationMethod method = AllocationMethod::meanvar;
    MeanVarTarget meanvar_target = MeanVarTarget::gmv;
    double target_mean = 0.0;
    double risk_tolerance = 1.0;
    meanvar::RidgeOptions ridge;

    double alpha = 0.95;
    cvar::StrategyConstraint strategy = cvar::StrategyConstraint::long_only();
    std::optional<double> cvar_target_mean;
    std::size_t scenarios = 2000;
    std::uint64_t seed = 1;
};

std::string_view to_string(AllocationMethod method);
AllocationMethod parse_allocation_method(std::string_view name);
std::string_view to_string(MeanVarTarget target);
MeanVarTarget parse_meanvar_target(std::string_view name);

/// One allocation per state from that state's (μ_s, Σ_s). The cvar method draws
/// `scenarios` Gaussian scenarios per state from the same random stream, so states with
/// equal parameters receive identical scenarios. Needs p = 0.
std::vector<WeightVector> regime_conditional_weights(const MsModel& model, std::vector<std::string> asset_ids,
                                                     const AllocationParams& params);

struct GrowthRegime {
    double mean = 0.0;
    double sd = 0.01;
};

/// Power-utility discount factor m = β·g^(−γ).
struct SdfParams {
    double beta = 0.96;
    double gamma = 2.0;
    std::vector<GrowthRegime> growth;  ///< per state, for simulated consumption growth

    void validate() const;
};

double sdf_value(const SdfParams& params, double gross_growth);

/// Joint draws of the discount factor and an excess return within one state.
struct StateDraws {
    numerics::Vector sdf;
    numerics::Vector excess_return;
};

/// −Σ_s π_s·Cov_s(m, r − r^f) / Σ_s π_s·E_s[m], with sample (n − 1) covariances.
double regime_risk_premium(std::span<const double> state_probs, std::span<const StateDraws> draws);

/// Lognormal gross growth g = exp(mean + sd·z) for one state.
numerics::Vector simulate_growth(const GrowthRegime& regime, std::size_t draws, std::uint64_t seed);

}  // namespace allockit::regime
