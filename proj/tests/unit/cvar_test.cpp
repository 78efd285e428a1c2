#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "allockit/cvar/backtest.hpp"
#include "allockit/cvar/optimizer.hpp"
#include "allockit/cvar/scenarios.hpp"
#include "allockit/error.hpp"
#include "oracles.hpp"

using namespace allockit::cvar;
using allockit::ConfigError;
using allockit::NumericError;
using allockit::WeightVector;
using allockit::data::ReturnPanel;
using allockit::data::YearMonth;
using allockit::numerics::Matrix;
using allockit::numerics::Vector;

namespace {

ScenarioMatrix random_scenarios(std::size_t s, std::size_t n, std::mt19937_64& rng, double scale = 0.05) {
    std::normal_distribution<double> z;
    Matrix m(s, n);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.005 * static_cast<double>(j) + scale * z(rng);
    return ScenarioMatrix::equally_likely(allockit::default_asset_ids(n), std::move(m));
}

double cvar_of(const ScenarioMatrix& sc, const Vector& w, double alpha) {
    return empirical_var_cvar(portfolio_loss_scenarios(WeightVector{sc.asset_ids, w}, sc), sc.probabilities, alpha)
        .cvar;
}

Vector random_simplex_point(std::size_t n, std::mt19937_64& rng) {
    std::exponential_distribution<double> e;
    Vector w(n);
    double s = 0.0;
    for (auto& x : w) s += (x = e(rng));
    for (auto& x : w) x /= s;
    return w;
}

ReturnPanel make_panel(std::size_t t, std::size_t n, std::mt19937_64& rng, std::vector<std::string> ids = {}) {
    std::normal_distribution<double> z;
    ReturnPanel p;
    p.asset_ids = ids.empty() ? allockit::default_asset_ids(n) : std::move(ids);
    p.values = Matrix(t, n);
    YearMonth d{2001, 1};
    for (std::size_t i = 0; i < t; ++i) {
        p.dates.push_back(d);
        d = d.next();
        for (std::size_t j = 0; j < n; ++j) p.values(i, j) = 0.004 * static_cast<double>(j) + 0.04 * z(rng);
    }
    return p;
}

}  // namespace

TEST(PortfolioLoss, Examples) {
    const auto one = ScenarioMatrix::equally_likely({"A"}, Matrix{{0.1}, {-0.2}});
    const Vector l = portfolio_loss_scenarios(WeightVector{{"A"}, {1.0}}, one);
    EXPECT_EQ(l, (Vector{-0.1, 0.2}));

    const auto two = ScenarioMatrix::equally_likely({"A", "B"}, Matrix{{0.1, -0.1}, {0.0, 0.0}});
    EXPECT_EQ(portfolio_loss_scenarios(WeightVector{{"A", "B"}, {0.5, 0.5}}, two)[0], 0.0);
}

TEST(PortfolioLoss, MatchesElementwiseOracle) {
    std::mt19937_64 rng(1);
    const auto sc = random_scenarios(20, 3, rng);
    const Vector w{0.2, -0.5, 1.3};
    const Vector l = portfolio_loss_scenarios(WeightVector{sc.asset_ids, w}, sc);
    for (std::size_t s = 0; s < 20; ++s) {
        const double expect = -(w[0] * sc.scenarios(s, 0) + w[1] * sc.scenarios(s, 1) + w[2] * sc.scenarios(s, 2));
        EXPECT_NEAR(l[s], expect, 1e-15);
    }
}

TEST(PortfolioLoss, UniverseMismatchRejected) {
    const auto sc = ScenarioMatrix::equally_likely({"A", "B"}, Matrix{{0.1, 0.2}, {0.0, 0.1}});
    EXPECT_THROW(portfolio_loss_scenarios(WeightVector{{"A", "C"}, {0.5, 0.5}}, sc), ConfigError);
}

TEST(ScenarioMatrix, ValidatesProbabilities) {
    ScenarioMatrix sc{{"A"}, Matrix{{0.1}, {0.2}}, {0.5, 0.6}};
    EXPECT_THROW(sc.validate(), allockit::DataError);
    sc.probabilities = {1.5, -0.5};
    EXPECT_THROW(sc.validate(), allockit::DataError);
    EXPECT_THROW(ScenarioMatrix::equally_likely({"A"}, Matrix{{0.1}}), allockit::DataError);
}

TEST(EmpiricalVarCvar, Examples) {
    const auto a = empirical_var_cvar(Vector{1, 2, 3, 4}, 0.75);
    EXPECT_EQ(a.var, 3.0);
    EXPECT_EQ(a.cvar, 4.0);
    const auto b = empirical_var_cvar(Vector{-0.2, -0.1, 0.0, 0.1}, 0.75);
    EXPECT_EQ(b.var, 0.0);
    EXPECT_NEAR(b.cvar, 0.1, 1e-15);
    for (double alpha : {0.55, 0.9, 0.99}) {
        const auto c = empirical_var_cvar(Vector(7, 0.37), alpha);
        EXPECT_EQ(c.var, 0.37);
        EXPECT_EQ(c.cvar, 0.37);
    }
}

TEST(EmpiricalVarCvar, RejectsDegenerateAlpha) {
    for (double alpha : {0.5, 1.0, 0.2, -1.0, std::nan("")})
        EXPECT_THROW(empirical_var_cvar(Vector{1, 2}, alpha), ConfigError);
}

TEST(EmpiricalVarCvar, MatchesTailAverageOracle) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> a(0.51, 0.99);
    for (int trial = 0; trial < 500; ++trial) {
        Vector l(1 + trial % 60);
        for (auto& x : l) x = z(rng);
        const double alpha = a(rng);
        EXPECT_NEAR(empirical_var_cvar(l, alpha).cvar, oracle::tail_average_cvar(l, alpha), 1e-10);
    }
}

TEST(EmpiricalVarCvar, UnequalProbabilitiesAtoms) {
    // Mass 0.5 at 1 and at 2: VaR_0.75 is 2 and the tail is the atom itself.
    // Mass 0.9 at 0 covers alpha = 0.8, so VaR is 0 and the tail mixes both atoms.
    const auto r = empirical_var_cvar(Vector{2.0, 1.0}, Vector{0.5, 0.5}, 0.75);
    EXPECT_EQ(r.var, 2.0);
    EXPECT_EQ(r.cvar, 2.0);
    const auto s = empirical_var_cvar(Vector{0.0, 10.0}, Vector{0.9, 0.1}, 0.8);
    EXPECT_EQ(s.var, 0.0);
    EXPECT_DOUBLE_EQ(s.cvar, 5.0);
}

TEST(EmpiricalVarCvar, CoherenceOnDyadicDraws) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> ints(-512, 512);
    std::uniform_int_distribution<int> exps(-4, 4);
    const double alphas[] = {0.75, 0.875, 0.9375, 0.96875};
    for (int trial = 0; trial < 500; ++trial) {
        Vector l(16);
        for (auto& x : l) x = ints(rng) / 64.0;
        const double alpha = alphas[trial % 4];
        const double c = ints(rng) / 8.0;
        const double lambda = std::ldexp(1.0, exps(rng));
        const auto base = empirical_var_cvar(l, alpha);
        Vector shifted = l, scaled = l;
        for (auto& x : shifted) x += c;
        for (auto& x : scaled) x *= lambda;
        const auto sh = empirical_var_cvar(shifted, alpha);
        const auto sc = empirical_var_cvar(scaled, alpha);
        EXPECT_EQ(sh.var, base.var + c);
        EXPECT_EQ(sh.cvar, base.cvar + c);
        EXPECT_EQ(sc.var, base.var * lambda);
        EXPECT_EQ(sc.cvar, base.cvar * lambda);
        EXPECT_GE(base.cvar, base.var - 1e-9);
    }
}

TEST(EmpiricalVarCvar, CoherenceOnGenericDraws) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> a(0.51, 0.99);
    for (int trial = 0; trial < 500; ++trial) {
        const auto sc = random_scenarios(30, 4, rng);
        const double alpha = a(rng);
        const Vector w1 = random_simplex_point(4, rng), w2 = random_simplex_point(4, rng);
        Vector mid(4);
        for (std::size_t j = 0; j < 4; ++j) mid[j] = 0.5 * (w1[j] + w2[j]);
        EXPECT_LE(cvar_of(sc, mid, alpha), 0.5 * cvar_of(sc, w1, alpha) + 0.5 * cvar_of(sc, w2, alpha) + 1e-9);

        const Vector l = portfolio_loss_scenarios(WeightVector{sc.asset_ids, w1}, sc);
        const auto base = empirical_var_cvar(l, alpha);
        EXPECT_GE(base.cvar, base.var - 1e-9);
        const double c = z(rng);
        const double lambda = std::exp(z(rng));
        Vector shifted = l, scaled = l;
        for (auto& x : shifted) x += c;
        for (auto& x : scaled) x *= lambda;
        const double tol = 1e-12 * (std::abs(base.cvar) + std::abs(c) + 1.0);
        EXPECT_NEAR(empirical_var_cvar(shifted, alpha).cvar, base.cvar + c, tol);
        EXPECT_NEAR(empirical_var_cvar(scaled, alpha).cvar, base.cvar * lambda, tol * lambda);
    }
}

TEST(EmpiricalVarCvar, GaussianClosedForm) {
    std::mt19937_64 rng(5);
    const double mu = 0.01, sigma = 0.05;
    std::normal_distribution<double> r(mu, sigma);
    Vector losses(200000);
    for (auto& x : losses) x = -r(rng);
    const double q = oracle::normal_quantile(0.95);
    const double phi = std::exp(-0.5 * q * q) / std::sqrt(2.0 * M_PI);
    const double expected = -mu + sigma * phi / 0.05;
    EXPECT_NEAR(empirical_var_cvar(losses, 0.95).cvar, expected, 0.02 * expected);
}

TEST(MinimizeCvar, DominatedAssetExcluded) {
    const auto sc = ScenarioMatrix::equally_likely({"A", "B"}, Matrix{{0.0, -0.5}, {0.0, -0.5}, {0.0, -0.5}});
    const auto r = minimize_cvar(sc, 0.95, std::nullopt, StrategyConstraint::long_only());
    EXPECT_NEAR(r.weights.weights[0], 1.0, 1e-12);
    EXPECT_NEAR(r.weights.weights[1], 0.0, 1e-12);
    EXPECT_NEAR(r.cvar, 0.0, 1e-12);
}

TEST(MinimizeCvar, EqualWeightBypassesOptimizer) {
    std::mt19937_64 rng(6);
    const auto sc = random_scenarios(10, 4, rng);
    const auto r = minimize_cvar(sc, 0.9, 0.5, StrategyConstraint::equal_weight());
    for (double w : r.weights.weights) EXPECT_EQ(w, 0.25);
    EXPECT_GE(r.cvar, r.var - 1e-9);
}

TEST(MinimizeCvar, LongOnlyMatchesGridAndExactOracles) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sc = random_scenarios(12, 3, rng);
        const auto r = minimize_cvar(sc, 0.9, std::nullopt, StrategyConstraint::long_only());
        EXPECT_LE(r.cvar, oracle::grid_cvar_minimum(sc.scenarios, 0.9) + 1e-6);
        EXPECT_NEAR(r.cvar, oracle::arrangement_cvar_minimum(sc.scenarios, 0.9), 1e-6);
        EXPECT_NEAR(r.weights.sum(), 1.0, 1e-9);
        for (double w : r.weights.weights) EXPECT_GE(w, -1e-9);
    }
}

TEST(MinimizeCvar, ObjectiveAgreesWithEmpiricalMeasure) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto sc = random_scenarios(24, 5, rng);
        for (const auto& strategy : {StrategyConstraint::long_only(), StrategyConstraint::box(-0.5, 0.8)}) {
            const auto r = minimize_cvar(sc, 0.95, std::nullopt, strategy);
            EXPECT_NEAR(cvar_of(sc, r.weights.weights, 0.95), r.cvar, 1e-7);
            EXPECT_GE(r.cvar, r.var - 1e-9);
        }
    }
}

TEST(MinimizeCvar, DominatesRandomFeasiblePortfolios) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto sc = random_scenarios(30, 4, rng);
    const auto lo = minimize_cvar(sc, 0.95, std::nullopt, StrategyConstraint::long_only());
    const auto bx = minimize_cvar(sc, 0.95, std::nullopt, StrategyConstraint::box());
    for (int k = 0; k < 1000; ++k) {
        EXPECT_LE(lo.cvar, cvar_of(sc, random_simplex_point(4, rng), 0.95) + 1e-9);
        // Box-feasible: uniform in [−1, 1]³ with the last weight absorbing the budget.
        Vector w(4);
        w[0] = u(rng), w[1] = u(rng), w[2] = u(rng);
        w[3] = 1.0 - w[0] - w[1] - w[2];
        if (std::abs(w[3]) <= 1.0) EXPECT_LE(bx.cvar, cvar_of(sc, w, 0.95) + 1e-9);
    }
}

TEST(MinimizeCvar, UnconstrainedNeedsTargetMean) {
    std::mt19937_64 rng(10);
    const auto sc = random_scenarios(40, 3, rng);
    EXPECT_THROW(minimize_cvar(sc, 0.95, std::nullopt, StrategyConstraint::unconstrained()), ConfigError);
    const Vector m = sc.mean_returns();
    const double mu = (m[0] + m[1] + m[2]) / 3.0;
    const auto r = minimize_cvar(sc, 0.95, mu, StrategyConstraint::unconstrained());
    EXPECT_NEAR(r.mean_return, mu, 1e-9);
    EXPECT_NEAR(r.weights.sum(), 1.0, 1e-9);
    EXPECT_NEAR(cvar_of(sc, r.weights.weights, 0.95), r.cvar, 1e-7);

    // Random points of the two-constraint plane never beat the optimum.
    std::normal_distribution<double> z;
    Vector e{m[0] - mu, m[1] - mu, m[2] - mu};
    for (int k = 0; k < 1000; ++k) {
        Vector d{z(rng), z(rng), z(rng)};
        const double dm = (d[0] + d[1] + d[2]) / 3.0;
        for (auto& x : d) x -= dm;
        const double proj = (d[0] * e[0] + d[1] * e[1] + d[2] * e[2]) / (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        Vector w = r.weights.weights;
        for (std::size_t j = 0; j < 3; ++j) w[j] += d[j] - proj * e[j];
        EXPECT_LE(r.cvar, cvar_of(sc, w, 0.95) + 1e-9);
    }
}

TEST(MinimizeCvar, UnattainableTargetIsReported) {
    std::mt19937_64 rng(11);
    const auto sc = random_scenarios(12, 3, rng);
    EXPECT_THROW(minimize_cvar(sc, 0.95, 10.0, StrategyConstraint::long_only()), NumericError);
    EXPECT_THROW(minimize_cvar(sc, 0.95, std::nullopt, StrategyConstraint::box(0.5, 0.9)), ConfigError);
    EXPECT_THROW(minimize_cvar(sc, 0.95, std::nullopt, StrategyConstraint::box(0.5, 0.5)), ConfigError);
}

TEST(MaximizeRatio, BeatsRandomLongOnlyPortfolios) {
    std::mt19937_64 rng(12);
    int checked = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto sc = random_scenarios(36, 4, rng, 0.03);
        const auto r = maximize_return_per_cvar(sc, 0.95, StrategyConstraint::long_only());
        if (r.fallback) continue;
        ++checked;
        EXPECT_NEAR(r.weights.sum(), 1.0, 1e-12);
        const double best = r.mean_return / r.cvar;
        for (int k = 0; k < 1000; ++k) {
            const Vector w = random_simplex_point(4, rng);
            const double c = cvar_of(sc, w, 0.95);
            if (c <= 0.0) continue;
            EXPECT_LE(allockit::numerics::dot(sc.mean_returns(), w) / c, best + 1e-9);
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(MaximizeRatio, FallsBackWhenNoPositiveRatioExists) {
    // Every asset loses money in every scenario.
    const auto sc = ScenarioMatrix::equally_likely({"A", "B"}, Matrix{{-0.01, -0.02}, {-0.03, -0.01}, {-0.02, -0.02}});
    const auto r = maximize_return_per_cvar(sc, 0.9, StrategyConstraint::long_only());
    EXPECT_TRUE(r.fallback);
    const auto m = minimize_cvar(sc, 0.9, std::nullopt, StrategyConstraint::long_only());
    EXPECT_EQ(r.weights.weights, m.weights.weights);
}

TEST(MaximizeRatio, BoxWeightsRespectBounds) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto sc = random_scenarios(36, 5, rng, 0.03);
        const auto r = maximize_return_per_cvar(sc, 0.95, StrategyConstraint::box(-0.3, 0.6));
        EXPECT_NEAR(r.weights.sum(), 1.0, 1e-12);
        for (double w : r.weights.weights) {
            EXPECT_GE(w, -0.3 - 1e-9);
            EXPECT_LE(w, 0.6 + 1e-9);
        }
    }
}

TEST(RollingBacktest, EqualWeightDesignatedWeightIsExact) {
    std::mt19937_64 rng(14);
    const auto panel = make_panel(30, 4, rng, {"BTC", "X", "Y", "Z"});
    BacktestConfig cfg;
    cfg.window = 12;
    cfg.strategies = {StrategyConstraint::equal_weight()};
    const auto res = rolling_backtest(panel, cfg);
    EXPECT_EQ(res.row(StrategyKind::equal_weight, true).avg_designated_weight, 0.25);
    EXPECT_FALSE(res.row(StrategyKind::equal_weight, false).avg_designated_weight.has_value());
    EXPECT_EQ(res.row(StrategyKind::equal_weight, true).rebalances, 18u);
}

TEST(RollingBacktest, SingleRebalanceEqualsSingleOptimization) {
    std::mt19937_64 rng(15);
    const auto panel = make_panel(25, 3, rng, {"A", "BTC", "C"});
    BacktestConfig cfg;
    cfg.window = 24;
    cfg.strategies = {StrategyConstraint::long_only()};
    const auto res = rolling_backtest(panel, cfg);
    ASSERT_EQ(res.details.size(), 2u);
    const auto single = minimize_cvar(ScenarioMatrix::from_panel(panel.slice(0, 24)), 0.95, std::nullopt,
                                      StrategyConstraint::long_only());
    const auto& row = res.row(StrategyKind::long_only, true);
    EXPECT_EQ(row.avg_cvar, single.cvar);
    EXPECT_EQ(*row.avg_designated_weight, single.weights.weights[1]);
    EXPECT_EQ(row.avg_return, allockit::numerics::dot(single.weights.weights, panel.row(24)));
    EXPECT_EQ(row.avg_in_sample_return, single.mean_return);
    EXPECT_EQ(res.details[0].date, panel.dates[23]);
}

TEST(RollingBacktest, RejectsBadConfigurations) {
    std::mt19937_64 rng(16);
    const auto panel = make_panel(20, 3, rng, {"A", "BTC", "C"});
    BacktestConfig cfg;
    cfg.window = 20;
    EXPECT_THROW(rolling_backtest(panel, cfg), ConfigError);
    cfg.window = 10;
    cfg.designated_asset = "ETH";
    EXPECT_THROW(rolling_backtest(panel, cfg), ConfigError);
    cfg.designated_asset = "BTC";
    cfg.alpha = 0.4;
    EXPECT_THROW(rolling_backtest(panel, cfg), ConfigError);
}

TEST(RollingBacktest, WorkerCountDoesNotChangeResults) {
    std::mt19937_64 rng(17);
    const auto panel = make_panel(40, 4, rng, {"BTC", "X", "Y", "Z"});
    for (auto objective : {Objective::min_cvar, Objective::max_ratio}) {
        BacktestConfig cfg;
        cfg.window = 24;
        cfg.objective = objective;
        const auto serial = rolling_backtest(panel, cfg);
        cfg.workers = 3;
        const auto parallel = rolling_backtest(panel, cfg);
        EXPECT_EQ(allockit::io::to_csv_string(summary_to_csv(serial)),
                  allockit::io::to_csv_string(summary_to_csv(parallel)));
        EXPECT_EQ(allockit::io::to_csv_string(details_to_csv(serial)),
                  allockit::io::to_csv_string(details_to_csv(parallel)));
    }
}

TEST(RollingBacktest, ReportsRoundTrip) {
    std::mt19937_64 rng(18);
    const auto panel = make_panel(30, 3, rng, {"BTC", "X", "Y"});
    BacktestConfig cfg;
    cfg.window = 20;
    const auto res = rolling_backtest(panel, cfg);
    ASSERT_EQ(res.summary.size(), 8u);

    const auto summary = summary_from_csv(allockit::io::parse_csv(allockit::io::to_csv_string(summary_to_csv(res))));
    ASSERT_EQ(summary.size(), res.summary.size());
    for (std::size_t i = 0; i < summary.size(); ++i) {
        EXPECT_EQ(summary[i].strategy, res.summary[i].strategy);
        EXPECT_EQ(summary[i].with_designated, res.summary[i].with_designated);
        EXPECT_EQ(summary[i].avg_designated_weight, res.summary[i].avg_designated_weight);
        EXPECT_EQ(summary[i].avg_return, res.summary[i].avg_return);
        EXPECT_EQ(summary[i].avg_cvar, res.summary[i].avg_cvar);
        if (std::isnan(res.summary[i].risk_return_ratio))
            EXPECT_TRUE(std::isnan(summary[i].risk_return_ratio));
        else
            EXPECT_EQ(summary[i].risk_return_ratio, res.summary[i].risk_return_ratio);
    }

    const auto details = details_from_csv(allockit::io::parse_csv(allockit::io::to_csv_string(details_to_csv(res))));
    ASSERT_EQ(details.size(), res.details.size());
    for (std::size_t i = 0; i < details.size(); ++i) {
        EXPECT_EQ(details[i].date, res.details[i].date);
        EXPECT_EQ(details[i].strategy, res.details[i].strategy);
        EXPECT_EQ(details[i].with_designated, res.details[i].with_designated);
        EXPECT_EQ(details[i].weights.asset_ids, res.details[i].weights.asset_ids);
        EXPECT_EQ(details[i].weights.weights, res.details[i].weights.weights);
        EXPECT_EQ(details[i].realized_return, res.details[i].realized_return);
        EXPECT_EQ(details[i].cvar, res.details[i].cvar);
        EXPECT_EQ(details[i].in_sample_return, res.details[i].in_sample_return);
    }
}

TEST(RollingBacktest, MeanTargetPinsEveryStrategyToTheEqualWeightMean) {
    std::mt19937_64 rng(19);
    const auto panel = make_panel(30, 4, rng, {"BTC", "X", "Y", "Z"});
    BacktestConfig cfg;
    cfg.window = 20;
    cfg.objective = Objective::mean_target;
    const auto res = rolling_backtest(panel, cfg);
    ASSERT_EQ(res.details.size(), 4u * 2u * 10u);
    for (std::size_t r = 0; r < 10; ++r) {
        const auto window = panel.slice(r, 20);
        for (bool with : {true, false}) {
            const auto in_sample = with ? window : window.without("BTC");
            double ew = 0.0;
            for (std::size_t t = 0; t < in_sample.num_periods(); ++t)
                for (double v : in_sample.row(t)) ew += v;
            ew /= static_cast<double>(in_sample.num_periods() * in_sample.num_assets());
            for (const auto& d : res.details) {
                if (d.with_designated != with || d.date != window.dates.back()) continue;
                EXPECT_NEAR(d.in_sample_return, ew, 1e-10) << to_string(d.strategy);
                EXPECT_NEAR(d.weights.sum(), 1.0, 1e-10);
            }
        }
    }
    EXPECT_EQ(parse_objective(to_string(Objective::mean_target)), Objective::mean_target);
    EXPECT_EQ(to_string(Objective::mean_target), "mean_target");
    EXPECT_THROW(parse_objective("mean"), ConfigError);
}
