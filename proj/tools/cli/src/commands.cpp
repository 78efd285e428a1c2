#include "allockit/cli/commands.hpp"

#include <algorithm>
#include <cmath>

#include "allockit/cli/fixture.hpp"
#include "allockit/cli/reports.hpp"
#include "allockit/cvar/backtest.hpp"
#include "allockit/data/loader.hpp"
#include "allockit/data/returns.hpp"
#include "allockit/data/stats.hpp"
#include "allockit/error.hpp"
#include "allockit/meanvar/frontier.hpp"
#include "allockit/regime/allocation.hpp"
#include "allockit/regime/em.hpp"
#include "allockit/regime/filter.hpp"

namespace allockit::cli {

namespace {

using numerics::Vector;

class ReportWriter {
public:
    ReportWriter(const RunConfig& config, CommandResult& result) : config_(config), result_(result) {
        std::filesystem::create_directories(config.out_dir);
    }

    void csv(const std::string& name, const io::CsvTable& table) {
        const auto path = config_.out_dir / name;
        io::write_csv(path, table);
        result_.files.push_back(path);
    }

    void json(const std::string& name, const Json& j) {
        const auto path = config_.out_dir / name;
        io::write_text(path, dump_json(j));
        result_.files.push_back(path);
    }

    template <typename ToCsv, typename ToJson>
    void report(const std::string& stem, ToCsv&& to_csv, ToJson&& to_json) {
        if (config_.format == ReportFormat::csv)
            csv(stem + ".csv", to_csv());
        else
            json(stem + ".json", to_json());
    }

private:
    const RunConfig& config_;
    CommandResult& result_;
};

void require_asset(const data::ReturnPanel& panel, const std::string& id, const std::string& key) {
    if (!panel.index_of(id)) throw ConfigError(key + " '" + id + "' is not in the input");
}

cvar::StrategyConstraint make_strategy(cvar::StrategyKind kind, const RunConfig& config) {
    switch (kind) {
        case cvar::StrategyKind::unconstrained: return cvar::StrategyConstraint::unconstrained();
        case cvar::StrategyKind::long_only: return cvar::StrategyConstraint::long_only();
        case cvar::StrategyKind::box: return cvar::StrategyConstraint::box(config.box_lower, config.box_upper);
        case cvar::StrategyKind::equal_weight: return cvar::StrategyConstraint::equal_weight();
    }
    throw ConfigError("unknown strategy");
}

std::string mu_label(double mu) { return "mu=" + io::format_double(mu); }

std::vector<double> mean_grid(const RunConfig& config, const meanvar::FrontierSolver& solver) {
    if (!config.mu_grid.empty()) return config.mu_grid;
    const double lo = solver.coefficients().gmv_mean();
    const double hi = *std::max_element(solver.means().begin(), solver.means().end());
    if (config.grid_points == 1) return {lo};
    std::vector<double> grid;
    for (std::size_t i = 0; i < config.grid_points; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(config.grid_points - 1));
    return grid;
}

Portfolio state_portfolio(const regime::MsModel& model, std::size_t s, const WeightVector& w) {
    Portfolio p;
    p.label = model.k() == 2 ? (s == 0 ? "bear" : "bull") : "state_" + std::to_string(s + 1);
    p.target_mean = numerics::dot(w.weights, model.states[s].intercept);
    p.variance = numerics::quadratic_form(model.states[s].covariance, w.weights);
    p.weights = w;
    return p;
}

double sample_mean(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_covariance(const Vector& a, const Vector& b) {
    const double ma = sample_mean(a), mb = sample_mean(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

// Regime risk premium with historical draws: each row goes to its most probable smoothed
// state, consumption growth is proxied by a return series and π is the last filtered row.
std::optional<Json> risk_premium_report(const RunConfig& config, const data::ReturnPanel& panel,
                                        const regime::FitReport& fit, CommandResult& result) {
    if (!panel.index_of(config.designated_asset)) {
        result.warnings.push_back("risk premium skipped: designated asset '" + config.designated_asset +
                                  "' is not in the input");
        return std::nullopt;
    }
    const bool has_riskfree = !config.riskfree_asset.empty() && panel.index_of(config.riskfree_asset);
    std::string growth = config.growth_asset;
    if (growth.empty()) {
        for (const auto& id : panel.asset_ids)
            if (id != config.designated_asset && !(has_riskfree && id == config.riskfree_asset)) {
                growth = id;
                break;
            }
        if (growth.empty()) {
            result.warnings.push_back("risk premium skipped: no series available as a growth proxy");
            return std::nullopt;
        }
    } else {
        require_asset(panel, growth, "sdf.growth_asset");
    }

    regime::SdfParams sdf{config.beta, config.gamma, {}};
    const std::size_t gi = *panel.index_of(growth);
    const std::size_t di = *panel.index_of(config.designated_asset);
    const auto& probs = fit.probabilities;
    const std::size_t k = fit.model.k();

    std::vector<regime::StateDraws> draws(k);
    for (std::size_t r = 0; r < probs.rows(); ++r) {
        const auto row = probs.smoothed.row(r);
        const auto s = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        const std::size_t t = probs.first_row + r;
        double excess = panel.values(t, di);
        if (has_riskfree) excess -= panel.values(t, *panel.index_of(config.riskfree_asset));
        draws[s].sdf.push_back(regime::sdf_value(sdf, 1.0 + panel.values(t, gi)));
        draws[s].excess_return.push_back(excess);
    }

    const auto last = probs.filtered.row(probs.rows() - 1);
    Json states = Json::array();
    bool enough = true;
    for (std::size_t s = 0; s < k; ++s) {
        Json entry{{"state", s + 1}, {"rows", draws[s].sdf.size()}};
        if (draws[s].sdf.size() >= 2) {
            entry["mean_sdf"] = sample_mean(draws[s].sdf);
            entry["cov_sdf_excess"] = sample_covariance(draws[s].sdf, draws[s].excess_return);
        } else {
            entry["mean_sdf"] = nullptr;
            entry["cov_sdf_excess"] = nullptr;
            enough = false;
        }
        states.push_back(std::move(entry));
    }

    Json out{{"beta", sdf.beta},
             {"gamma", sdf.gamma},
             {"growth_series", growth},
             {"growth_is_proxy", true},
             {"excess_return_of", config.designated_asset},
             {"riskfree_series", has_riskfree ? Json(config.riskfree_asset) : Json(nullptr)},
             {"state_probabilities", Vector(last.begin(), last.end())},
             {"states", states}};
    if (enough) {
        out["risk_premium"] = regime::regime_risk_premium(last, draws);
    } else {
        out["risk_premium"] = nullptr;
        result.warnings.push_back("risk premium undefined: a state holds fewer than 2 observations");
    }
    return out;
}

}  // namespace

data::ReturnPanel load_returns(const RunConfig& config) {
    if (config.prices.empty()) throw ConfigError("input.prices is not set");
    const auto series = data::load_price_csv(config.prices, config.universe);
    data::ReturnPanel panel = data::to_nominal_returns(series);
    if (!config.cpi.empty()) panel = data::to_real_returns(panel, data::load_inflation_csv(config.cpi));
    panel.validate();
    return panel;
}

CommandResult cmd_stats(const RunConfig& config) {
    config.validate();
    const auto panel = load_returns(config);
    CommandResult result;
    ReportWriter out(config, result);

    const auto stats = data::descriptive_stats(panel);
    out.report("stats", [&] { return stats_to_csv(stats); }, [&] { return stats_to_json(stats); });

    const LabelledMatrix corr{panel.asset_ids, data::correlation_matrix(panel).matrix()};
    out.report("correlation", [&] { return matrix_to_csv(corr); }, [&] { return matrix_to_json(corr); });
    return result;
}

CommandResult cmd_meanvar(const RunConfig& config) {
    config.validate();
    const auto panel = load_returns(config);
    if (panel.num_assets() < 2) throw ConfigError("mean-variance analysis needs at least 2 assets");
    CommandResult result;
    ReportWriter out(config, result);

    const meanvar::RidgeOptions ridge{config.ridge, config.ridge_epsilon};
    std::optional<meanvar::FrontierSolver> solver;
    try {
        solver.emplace(data::sample_mean(panel), data::sample_covariance(panel), panel.asset_ids, ridge);
    } catch (const NotPositiveDefinite& e) {
        throw NumericError(std::string("sample covariance is not positive definite (") + e.what() +
                           "); set 'ridge = true' in [meanvar] to regularize it");
    }
    if (solver->ridge_applied()) result.warnings.push_back("covariance was ridged before solving");
    const auto& coef = solver->coefficients();

    const std::vector<Portfolio> gmv{{"gmv", coef.gmv_mean(), coef.gmv_variance(), solver->gmv()}};
    out.report("gmv_weights", [&] { return portfolios_to_csv(gmv); }, [&] { return portfolios_to_json(gmv); });

    if (coef.degenerate()) {
        result.warnings.push_back("all asset means are equal; the frontier collapses to the GMV portfolio");
        return result;
    }
    const auto grid = mean_grid(config, *solver);
    const auto points = solver->trace(grid);
    std::vector<Portfolio> efficient;
    for (const auto& p : points) efficient.push_back({mu_label(p.target_mean), p.target_mean, p.variance, p.weights});
    out.report("efficient_weights", [&] { return portfolios_to_csv(efficient); },
               [&] { return portfolios_to_json(efficient); });
    out.csv("frontier.csv", meanvar::frontier_to_csv(points));
    return result;
}

CommandResult cmd_cvar(const RunConfig& config) {
    config.validate();
    const auto panel = load_returns(config);
    require_asset(panel, config.designated_asset, "general.designated_asset");
    CommandResult result;
    ReportWriter out(config, result);

    for (const auto objective : config.objectives) {
        cvar::BacktestResult merged;
        merged.objective = objective;
        merged.alpha = config.alpha;
        merged.window = config.window;
        merged.designated_asset = config.designated_asset;
        merged.asset_ids = panel.asset_ids;
        std::vector<std::string> errors;

        for (const auto kind : config.strategies) {
            cvar::BacktestConfig bc;
            bc.alpha = config.alpha;
            bc.window = config.window;
            bc.strategies = {make_strategy(kind, config)};
            bc.designated_asset = config.designated_asset;
            bc.objective = objective;
            bc.workers = config.workers;
            try {
                auto r = cvar::rolling_backtest(panel, bc);
                merged.summary.insert(merged.summary.end(), r.summary.begin(), r.summary.end());
                merged.details.insert(merged.details.end(), r.details.begin(), r.details.end());
            } catch (const NumericError& e) {
                errors.push_back(std::string(cvar::to_string(kind)) + ": " + e.what());
            } catch (const ConfigError& e) {
                errors.push_back(std::string(cvar::to_string(kind)) + ": " + e.what());
            }
        }
        for (const auto& e : errors)
            result.warnings.push_back(std::string(cvar::to_string(objective)) + " strategy skipped, " + e);
        if (merged.summary.empty()) throw ConfigError("every cvar strategy failed for " + std::string(cvar::to_string(objective)));

        const std::string tag(cvar::to_string(objective));
        out.csv("cvar_summary_" + tag + ".csv", cvar::summary_to_csv(merged));
        out.csv("cvar_detail_" + tag + ".csv", cvar::details_to_csv(merged));
        if (config.format == ReportFormat::json) out.json("cvar_" + tag + ".json", backtest_to_json(merged, errors));
    }
    return result;
}

CommandResult cmd_regime(const RunConfig& config) {
    config.validate();
    const auto panel = load_returns(config);
    CommandResult result;

    regime::EmConfig em;
    em.k = config.states;
    em.p = config.order;
    em.starts = config.starts;
    em.seed = derive_seed(config.seed, SeedStream::regime);
    em.tolerance = config.tolerance;
    em.max_iterations = config.max_iterations;
    em.workers = config.workers;
    const auto fit = regime::em_fit(panel, em);
    result.warnings.insert(result.warnings.end(), fit.warnings.begin(), fit.warnings.end());

    ReportWriter out(config, result);
    out.json("fit.json", fit_to_json(fit, panel.asset_ids));
    out.csv("probabilities.csv", regime::probabilities_to_csv(fit.probabilities, panel));

    if (config.regime_weights) {
        if (config.order != 0) {
            result.warnings.push_back("per-state weights skipped: they need regime.p = 0");
        } else {
            regime::AllocationParams ap;
            ap.method = *config.regime_weights;
            ap.meanvar_target = config.regime_target;
            ap.target_mean = config.regime_target_mean;
            ap.risk_tolerance = config.risk_tolerance;
            ap.ridge = {config.ridge, config.ridge_epsilon};
            ap.alpha = config.alpha;
            ap.scenarios = config.cvar_scenarios;
            ap.seed = derive_seed(config.seed, SeedStream::allocation);
            const auto weights = regime::regime_conditional_weights(fit.model, panel.asset_ids, ap);
            std::vector<Portfolio> per_state;
            for (std::size_t s = 0; s < weights.size(); ++s) per_state.push_back(state_portfolio(fit.model, s, weights[s]));
            out.report("regime_weights", [&] { return portfolios_to_csv(per_state); },
                       [&] { return portfolios_to_json(per_state); });
        }
    }

    if (config.sdf_enabled) {
        if (auto premium = risk_premium_report(config, panel, fit, result)) out.json("risk_premium.json", *premium);
    }

    if (!fit.converged) result.exit_code = kExitConvergence;
    return result;
}

CommandResult cmd_fixture(const RunConfig& config) {
    config.validate();
    FixtureOptions options;
    options.seed = config.seed;
    options.returns = config.fixture_returns;
    const Fixture fx = generate_fixture(options);

    CommandResult result;
    write_fixture(fx, config.out_dir);
    result.files.push_back(config.out_dir / "prices.csv");
    result.files.push_back(config.out_dir / "cpi.csv");
    const auto ini = config.out_dir / "allockit.ini";
    io::write_text(ini, "[input]\nprices = prices.csv\ncpi = cpi.csv\n\n[general]\nseed = " +
                            std::to_string(config.seed) + "\n");
    result.files.push_back(ini);
    return result;
}

}  // namespace allockit::cli
