#include "allockit/cvar/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "allockit/error.hpp"

namespace allockit::cvar {

using numerics::Matrix;
using numerics::Vector;

numerics::Vector ScenarioMatrix::mean_returns() const {
    Vector m(num_assets(), 0.0);
    for (std::size_t s = 0; s < num_scenarios(); ++s) {
        const auto row = scenarios.row(s);
        for (std::size_t j = 0; j < m.size(); ++j) m[j] += probabilities[s] * row[j];
    }
    return m;
}

void ScenarioMatrix::validate() const {
    if (num_scenarios() < 2) throw DataError("scenario matrix needs at least two scenarios");
    if (asset_ids.size() != num_assets()) throw DataError("scenario labels do not match the number of columns");
    if (probabilities.size() != num_scenarios()) throw DataError("one probability per scenario is required");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) throw DataError("scenario probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DataError("scenario probabilities must sum to 1");
}

ScenarioMatrix ScenarioMatrix::equally_likely(std::vector<std::string> asset_ids, Matrix scenarios) {
    const std::size_t s = scenarios.rows();
    ScenarioMatrix sc{std::move(asset_ids), std::move(scenarios), Vector(s, s ? 1.0 / static_cast<double>(s) : 0.0)};
    sc.validate();
    return sc;
}

ScenarioMatrix ScenarioMatrix::from_panel(const data::ReturnPanel& panel) {
    return equally_likely(panel.asset_ids, panel.values);
}

Vector portfolio_loss_scenarios(const WeightVector& w, const ScenarioMatrix& sc) {
    if (w.asset_ids != sc.asset_ids || w.weights.size() != sc.num_assets())
        throw ConfigError("weight vector and scenario matrix cover different assets");
    Vector losses(sc.num_scenarios());
    for (std::size_t s = 0; s < losses.size(); ++s) losses[s] = -numerics::dot(w.weights, sc.scenarios.row(s));
    return losses;
}

void validate_alpha(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) throw ConfigError("alpha must lie strictly between 0.5 and 1");
}

RiskMeasure empirical_var_cvar(std::span<const double> losses, std::span<const double> probabilities, double alpha) {
    validate_alpha(alpha);
    if (losses.empty() || losses.size() != probabilities.size())
        throw DataError("losses and probabilities must be nonempty and of equal length");

    std::vector<std::size_t> order(losses.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });

    RiskMeasure r;
    r.var = losses[order.back()];
    double cumulative = 0.0;
    for (std::size_t i : order) {
        cumulative += probabilities[i];
        if (cumulative >= alpha - 1e-12) {
            r.var = losses[i];
            break;
        }
    }
    double excess = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i)
        if (losses[i] > r.var) excess += probabilities[i] * (losses[i] - r.var);
    r.cvar = r.var + excess / (1.0 - alpha);
    return r;
}

RiskMeasure empirical_var_cvar(std::span<const double> losses, double alpha) {
    const Vector p(losses.size(), losses.empty() ? 0.0 : 1.0 / static_cast<double>(losses.size()));
    return empirical_var_cvar(losses, p, alpha);
}

}  // namespace allockit::cvar
