#include "allockit/regime/allocation.hpp"

#include <cmath>
#include <random>

#include "allockit/error.hpp"
#include "allockit/numerics/gaussian.hpp"

namespace allockit::regime {

using numerics::Matrix;
using numerics::Vector;

std::string_view to_string(AllocationMethod method) {
    return method == AllocationMethod::meanvar ? "meanvar" : "cvar";
}

AllocationMethod parse_allocation_method(std::string_view name) {
    if (name == "meanvar") return AllocationMethod::meanvar;
    if (name == "cvar") return AllocationMethod::cvar;
    throw ConfigError("unknown allocation method '" + std::string(name) + "'");
}

std::string_view to_string(MeanVarTarget target) {
    switch (target) {
        case MeanVarTarget::gmv: return "gmv";
        case MeanVarTarget::target_mean: return "target_mean";
        case MeanVarTarget::risk_tolerance: return "risk_tolerance";
    }
    return "unknown";
}

MeanVarTarget parse_meanvar_target(std::string_view name) {
    for (auto t : {MeanVarTarget::gmv, MeanVarTarget::target_mean, MeanVarTarget::risk_tolerance})
        if (to_string(t) == name) return t;
    throw ConfigError("unknown mean-variance target '" + std::string(name) + "'");
}

std::vector<WeightVector> regime_conditional_weights(const MsModel& model, std::vector<std::string> asset_ids,
                                                     const AllocationParams& params) {
    model.validate();
    if (model.p != 0) throw ConfigError("regime-conditional weights need a model without autoregressive terms");
    const std::size_t d = model.dims();
    if (asset_ids.empty()) asset_ids = default_asset_ids(d);
    if (asset_ids.size() != d) throw ConfigError("asset id count does not match the model dimension");

    std::vector<WeightVector> out;
    for (std::size_t s = 0; s < model.k(); ++s) {
        const StateParams& st = model.states[s];
        if (params.method == AllocationMethod::meanvar) {
            const meanvar::FrontierSolver solver(st.intercept, st.covariance, asset_ids, params.ridge);
            switch (params.meanvar_target) {
                case MeanVarTarget::gmv: out.push_back(solver.gmv()); break;
                case MeanVarTarget::target_mean: out.push_back(solver.efficient(params.target_mean).weights); break;
                case MeanVarTarget::risk_tolerance:
                    out.push_back(solver.efficient_at_slope(params.risk_tolerance).weights);
                    break;
            }
            continue;
        }
        if (params.scenarios < 2) throw ConfigError("at least two scenarios per state are required");
        const numerics::GaussianDensity g(st.intercept, st.covariance);
        std::mt19937_64 rng(params.seed);
        std::normal_distribution<double> normal;
        Matrix y(params.scenarios, d);
        Vector z(d);
        for (std::size_t r = 0; r < params.scenarios; ++r) {
            for (auto& v : z) v = normal(rng);
            const Vector draw = g.transform(z);
            for (std::size_t c = 0; c < d; ++c) y(r, c) = draw[c];
        }
        const auto sc = cvar::ScenarioMatrix::equally_likely(asset_ids, std::move(y));
        out.push_back(cvar::minimize_cvar(sc, params.alpha, params.cvar_target_mean, params.strategy).weights);
    }
    return out;
}

void SdfParams::validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("discount factor beta must lie in (0, 1]");
    if (!(gamma >= 0.0)) throw ConfigError("risk aversion gamma must be nonnegative");
    for (const auto& g : growth)
        if (!(g.sd > 0.0)) throw ConfigError("consumption growth volatility must be positive");
}

double sdf_value(const SdfParams& params, double gross_growth) {
    if (!(gross_growth > 0.0)) throw ConfigError("gross consumption growth must be positive");
    if (params.gamma == 0.0) return params.beta;
    return params.beta * std::pow(gross_growth, -params.gamma);
}

double regime_risk_premium(std::span<const double> state_probs, std::span<const StateDraws> draws) {
    if (state_probs.size() != draws.size() || draws.empty())
        throw ConfigError("one set of draws per state probability is required");
    double total = 0.0;
    for (double p : state_probs) {
        if (!(p >= 0.0)) throw ConfigError("state probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10) throw ConfigError("state probabilities must sum to 1");

    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t s = 0; s < draws.size(); ++s) {
        const auto& m = draws[s].sdf;
        const auto& r = draws[s].excess_return;
        if (m.size() != r.size() || m.size() < 2) throw ConfigError("each state needs at least two joint draws");
        const auto n = static_cast<double>(m.size());
        double mm = 0.0, mr = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            mm += m[i];
            mr += r[i];
        }
        mm /= n;
        mr /= n;
        double cov = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) cov += (m[i] - mm) * (r[i] - mr);
        cov /= n - 1.0;
        numerator += state_probs[s] * cov;
        denominator += state_probs[s] * mm;
    }
    if (!(denominator > 0.0)) throw NumericError("expected discount factor is not positive");
    return -numerator / denominator;
}

Vector simulate_growth(const GrowthRegime& regime, std::size_t draws, std::uint64_t seed) {
    if (!(regime.sd > 0.0)) throw ConfigError("consumption growth volatility must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    Vector g(draws);
    for (auto& v : g) v = std::exp(regime.mean + regime.sd * z(rng));
    return g;
}

}  // namespace allockit::regime
