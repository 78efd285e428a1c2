#include "allockit/cvar/optimizer.hpp"

#include <cmath>

#include "allockit/error.hpp"
#include "allockit/numerics/simplex.hpp"

namespace allockit::cvar {

using numerics::kInfinity;
using numerics::LinearProgram;
using numerics::LpStatus;
using numerics::Relation;
using numerics::Vector;

double StrategyConstraint::lower_bound() const {
    switch (kind) {
        case StrategyKind::unconstrained: return -kInfinity;
        case StrategyKind::long_only: return 0.0;
        case StrategyKind::box: return lower;
        case StrategyKind::equal_weight: return -kInfinity;
    }
    return -kInfinity;
}

double StrategyConstraint::upper_bound() const {
    switch (kind) {
        case StrategyKind::unconstrained: return kInfinity;
        case StrategyKind::long_only: return 1.0;
        case StrategyKind::box: return upper;
        case StrategyKind::equal_weight: return kInfinity;
    }
    return kInfinity;
}

void StrategyConstraint::validate() const {
    if (kind == StrategyKind::box && !(lower < upper)) throw ConfigError("box bounds need lower < upper");
}

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::unconstrained: return "unconstrained";
        case StrategyKind::long_only: return "long_only";
        case StrategyKind::box: return "box";
        case StrategyKind::equal_weight: return "equal_weight";
    }
    return "unknown";
}

StrategyKind parse_strategy_kind(std::string_view name) {
    for (auto k : {StrategyKind::unconstrained, StrategyKind::long_only, StrategyKind::box, StrategyKind::equal_weight})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

namespace {

CvarReport equal_weight_report(const ScenarioMatrix& sc, double alpha) {
    const auto n = sc.num_assets();
    return evaluate_portfolio(sc, alpha, WeightVector{sc.asset_ids, Vector(n, 1.0 / static_cast<double>(n))});
}

void check_feasible_box(const StrategyConstraint& strategy, std::size_t n) {
    if (strategy.kind != StrategyKind::box) return;
    const auto dn = static_cast<double>(n);
    if (strategy.lower * dn > 1.0 || strategy.upper * dn < 1.0)
        throw ConfigError("box bounds admit no fully invested portfolio");
}

}  // namespace

CvarReport evaluate_portfolio(const ScenarioMatrix& sc, double alpha, const WeightVector& w) {
    const Vector losses = portfolio_loss_scenarios(w, sc);
    const RiskMeasure m = empirical_var_cvar(losses, sc.probabilities, alpha);
    CvarReport r;
    r.alpha = alpha;
    r.var = m.var;
    r.cvar = m.cvar;
    r.weights = w;
    r.mean_return = numerics::dot(sc.mean_returns(), w.weights);
    return r;
}

CvarReport minimize_cvar(const ScenarioMatrix& sc, double alpha, std::optional<double> target_mean,
                         const StrategyConstraint& strategy) {
    validate_alpha(alpha);
    sc.validate();
    strategy.validate();
    if (strategy.kind == StrategyKind::equal_weight) return equal_weight_report(sc, alpha);
    if (strategy.kind == StrategyKind::unconstrained && !target_mean)
        throw ConfigError("the unconstrained strategy needs a target mean to keep the program bounded");
    const std::size_t n = sc.num_assets();
    const std::size_t s = sc.num_scenarios();
    check_feasible_box(strategy, n);

    // Variables: w (n), ζ, u (s).
    const std::size_t zeta = n;
    LinearProgram lp(n + 1 + s);
    for (std::size_t j = 0; j < n; ++j) {
        lp.lower[j] = strategy.lower_bound();
        lp.upper[j] = strategy.upper_bound();
    }
    lp.lower[zeta] = -kInfinity;
    lp.objective[zeta] = 1.0;
    for (std::size_t k = 0; k < s; ++k) lp.objective[zeta + 1 + k] = sc.probabilities[k] / (1.0 - alpha);

    for (std::size_t k = 0; k < s; ++k) {
        Vector row(lp.num_variables(), 0.0);
        const auto y = sc.scenarios.row(k);
        for (std::size_t j = 0; j < n; ++j) row[j] = -y[j];
        row[zeta] = -1.0;
        row[zeta + 1 + k] = -1.0;
        lp.add_constraint(std::move(row), Relation::less_equal, 0.0);
    }
    Vector budget(lp.num_variables(), 0.0);
    for (std::size_t j = 0; j < n; ++j) budget[j] = 1.0;
    lp.add_constraint(std::move(budget), Relation::equal, 1.0);
    if (target_mean) {
        Vector mean_row(lp.num_variables(), 0.0);
        const Vector m = sc.mean_returns();
        for (std::size_t j = 0; j < n; ++j) mean_row[j] = m[j];
        lp.add_constraint(std::move(mean_row), Relation::equal, *target_mean);
    }

    const auto sol = numerics::lp_solve(lp);
    if (sol.status == LpStatus::infeasible) throw NumericError("target mean is unattainable under the strategy bounds");
    if (sol.status == LpStatus::unbounded) throw NumericError("CVaR program is unbounded");
    if (!sol.optimal()) throw NumericError("CVaR program hit the simplex iteration limit");

    CvarReport r;
    r.alpha = alpha;
    r.var = sol.primal[zeta];
    r.cvar = sol.objective;
    r.weights = WeightVector{sc.asset_ids, Vector(sol.primal.begin(), sol.primal.begin() + static_cast<long>(n))};
    r.mean_return = numerics::dot(sc.mean_returns(), r.weights.weights);
    return r;
}

CvarReport maximize_return_per_cvar(const ScenarioMatrix& sc, double alpha, const StrategyConstraint& strategy,
                                    std::optional<double> fallback_mean) {
    validate_alpha(alpha);
    sc.validate();
    strategy.validate();
    if (strategy.kind == StrategyKind::equal_weight) return equal_weight_report(sc, alpha);
    const std::size_t n = sc.num_assets();
    const std::size_t s = sc.num_scenarios();
    check_feasible_box(strategy, n);

    // Variables: v (n), κ, ζ, u (s).
    const std::size_t kappa = n;
    const std::size_t zeta = n + 1;
    LinearProgram lp(n + 2 + s);
    const double lo = strategy.lower_bound();
    const double hi = strategy.upper_bound();
    for (std::size_t j = 0; j < n; ++j) {
        lp.lower[j] = std::isfinite(lo) && lo >= 0.0 ? 0.0 : -kInfinity;
        lp.upper[j] = kInfinity;
    }
    lp.lower[zeta] = -kInfinity;
    const Vector means = sc.mean_returns();
    for (std::size_t j = 0; j < n; ++j) lp.objective[j] = -means[j];

    for (std::size_t k = 0; k < s; ++k) {
        Vector row(lp.num_variables(), 0.0);
        const auto y = sc.scenarios.row(k);
        for (std::size_t j = 0; j < n; ++j) row[j] = -y[j];
        row[zeta] = -1.0;
        row[zeta + 1 + k] = -1.0;
        lp.add_constraint(std::move(row), Relation::less_equal, 0.0);
    }
    Vector cap(lp.num_variables(), 0.0);
    cap[zeta] = 1.0;
    for (std::size_t k = 0; k < s; ++k) cap[zeta + 1 + k] = sc.probabilities[k] / (1.0 - alpha);
    lp.add_constraint(std::move(cap), Relation::less_equal, 1.0);
    Vector budget(lp.num_variables(), 0.0);
    for (std::size_t j = 0; j < n; ++j) budget[j] = 1.0;
    budget[kappa] = -1.0;
    lp.add_constraint(std::move(budget), Relation::equal, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isfinite(hi)) {
            Vector row(lp.num_variables(), 0.0);
            row[j] = 1.0;
            row[kappa] = -hi;
            lp.add_constraint(std::move(row), Relation::less_equal, 0.0);
        }
        if (std::isfinite(lo) && lo != 0.0) {
            Vector row(lp.num_variables(), 0.0);
            row[j] = 1.0;
            row[kappa] = -lo;
            lp.add_constraint(std::move(row), Relation::greater_equal, 0.0);
        }
    }

    const auto sol = numerics::lp_solve(lp);
    if (sol.optimal() && sol.primal[kappa] > 1e-10 && -sol.objective > 1e-12) {
        const double k = sol.primal[kappa];
        WeightVector w{sc.asset_ids, Vector(n)};
        for (std::size_t j = 0; j < n; ++j) w.weights[j] = sol.primal[j] / k;
        // Clean up rounding so the budget holds exactly up to one ulp per asset.
        const double total = w.sum();
        for (auto& x : w.weights) x /= total;
        return evaluate_portfolio(sc, alpha, w);
    }
    if (sol.status == LpStatus::iteration_limit) throw NumericError("ratio program hit the simplex iteration limit");

    std::optional<double> mu = fallback_mean;
    if (strategy.kind != StrategyKind::unconstrained) mu.reset();
    CvarReport r = minimize_cvar(sc, alpha, mu, strategy);
    r.fallback = true;
    return r;
}

}  // namespace allockit::cvar
